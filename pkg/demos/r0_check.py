"""The R0 check for the recession problem.

The check looks for a nonzero direction of the asymptotic cone where the
gradients of the leading forms admit a vanishing nonnegative combination
lying in the cone's normal directions.  A hit is reported with the values
``d_i * h_i(witness)``; by the Euler identity these equal ``grad h_i . witness``.

Run:  python3 demos/r0_check.py
"""
from pvop.instances import load_fixtures
from pvop.poly import vector_leading_form
from pvop.regularity import check_problem

FIXTURES = {inst.name: inst for inst in load_fixtures()}

if __name__ == "__main__":
    for name in ("r0_wedge", "squares_orthant"):
        inst = FIXTURES[name]
        _, r0 = check_problem(inst.f, inst.K)
        print(f"== {name}: objectives {inst.f}")
        print(f"   R0 holds         : {r0.is_r0}   ({r0.samples_checked} base samples)")
        if not r0.is_r0:
            forms = vector_leading_form(inst.f)
            for w in r0.witnesses:
                conditions = [d * float(h(w)) for d, h in zip(inst.f.degrees, forms.components)]
                print(f"   witness {w.round(6).tolist()}  condition values {conditions}"
                      "  (not all strictly positive)")
        print()
