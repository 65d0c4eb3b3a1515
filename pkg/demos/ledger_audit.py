"""Attach the potential/energy ledger to a random run and read the books.

Each move releases energy that must pay for its work, and each update may
inject only a bounded amount.  At the end, the recomputed total potential
must equal the initial total plus what was absorbed minus what was released.

Run:  python demos/ledger_audit.py
"""

from dynvc import Auditor, DynamicGraph, audit_conservation, gen_random
from dynvc.tracegen import replay


def main():
    trace = gen_random(24, 400, 0.35, seed=42, eps="1/5")
    g = DynamicGraph(trace.n, trace.eps)
    auditor = Auditor(g, strict=True)  # raise on the first failed lemma check

    total_work = sum(r.work for r in replay(g, trace))

    report = audit_conservation(g, auditor)
    print(f"{len(trace)} updates, {auditor.events} ledger events, {auditor.checks_run} checks")
    print(f"work                {total_work}")
    print(f"energy released     {float(report.released_energy):.2f}")
    print(f"(1+eps) * released  {float((1 + g.eps) * report.released_energy):.2f}  >= work: "
          f"{report.work_covered}")
    print(f"initial potential   {report.initial}")
    print(f"+ absorbed          {report.absorbed}")
    print(f"- released          {report.released}")
    print(f"= final             {report.final}  (balanced exactly: {report.balanced})")

    print("\npotential released by type (level, direction):")
    for key, amount in auditor.by_type_released.items():
        print(f"  {key.level:>2} {key.direction:<4} {float(amount):8.4f}")


if __name__ == "__main__":
    main()
