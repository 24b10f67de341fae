"""Brute-force Pareto fronts on grid windows.

The grid oracle enumerates the feasible nodes of a window, evaluates the
objectives and keeps the nodes nobody dominates.  It is exact for the grid
and independent of the solver, which makes it the reference for checking
solver output.  When the weak Pareto set is empty the grid front is pushed
to the window boundary however large the window.

Run:  python3 demos/grid_fronts.py
"""
from pvop.instances import load_fixtures
from pvop.oracle import GridWindow, grid_front

FIXTURES = {inst.name: inst for inst in load_fixtures()}

if __name__ == "__main__":
    inst = FIXTURES["corner_minimum"]
    front = grid_front(inst.f, inst.K, GridWindow([1, 1], [3, 3], 41))
    print("== corner_minimum on [1,3]^2, 41 nodes per axis")
    print(f"   Pareto nodes      : {front.pareto_points.tolist()}")
    print(f"   weak Pareto nodes : {front.weak_pareto_points.tolist()}")
    print()

    inst = FIXTURES["unbounded_pareto_wedge"]
    front = grid_front(inst.f, inst.K, GridWindow([0, 0], [3, 3], 7))
    print("== unbounded_pareto_wedge on [0,3]^2, 7 nodes per axis (CSV)")
    print(front.to_csv(), end="")
    print()

    # The unattained instance hides its infimum in a valley of width about 1/T, so
    # its grid has to be refined faster than the window grows.
    cases = [("empty_weak_solution_set", (5, 10, 20, 40), lambda T: 8 * T + 1),
             ("unattained_infimum_plane", (5, 10, 15), lambda T: 2 * T * T + 1)]
    for name, sizes, resolution in cases:
        inst = FIXTURES[name]
        print(f"== {name}: largest distance of front nodes to the window edge")
        for T in sizes:
            window = GridWindow([-T, -T], [T, T], resolution(T))
            front = grid_front(inst.f, inst.K, window)
            print(f"   window [-{T},{T}]^2, {resolution(T)} nodes per axis: "
                  f"{front.weak.sum()} weak nodes, "
                  f"max {front.boundary_distance('weak').max():.1f} cells from the edge")
        print()
