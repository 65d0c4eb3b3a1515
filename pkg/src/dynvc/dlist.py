"""Intrusive circular doubly linked lists for neighborhood buckets.

A :class:`Link` lives inside exactly one :class:`DList` at a time.  Links do
not record their container, which is what makes :meth:`DList.splice` O(1);
callers always know the container from the endpoint levels.
"""

from __future__ import annotations


class Link:
    __slots__ = ("prev", "next", "nbr", "twin", "edge")

    def __init__(self, nbr: int = -1, edge=None):
        self.prev = self
        self.next = self
        self.nbr = nbr      # the endpoint on the far side of the edge
        self.twin = None    # the matching Link in the neighbor's lists
        self.edge = edge

    def __repr__(self):
        return f"<Link nbr={self.nbr}>"


class DList:
    __slots__ = ("head", "size")

    def __init__(self):
        self.head = Link()
        self.size = 0

    def __len__(self):
        return self.size

    def __bool__(self):
        return self.size > 0

    def __iter__(self):
        """Iterate links; safe against unlinking the link just yielded."""
        head = self.head
        link = head.next
        while link is not head:
            nxt = link.next
            yield link
            link = nxt

    def append(self, link: Link) -> None:
        head = self.head
        last = head.prev
        link.prev = last
        link.next = head
        last.next = link
        head.prev = link
        self.size += 1

    def remove(self, link: Link) -> None:
        link.prev.next = link.next
        link.next.prev = link.prev
        link.prev = link.next = link
        self.size -= 1

    def splice(self, other: "DList") -> None:
        """Move every link of ``other`` to the end of this list in O(1)."""
        if not other.size:
            return
        head, ohead = self.head, other.head
        first, last = ohead.next, ohead.prev
        tail = head.prev
        tail.next = first
        first.prev = tail
        last.next = head
        head.prev = last
        self.size += other.size
        ohead.next = ohead.prev = ohead
        other.size = 0

    def neighbors(self) -> list:
        return [link.nbr for link in self]
