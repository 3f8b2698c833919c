"""Writes cabello18.json: 18 rays of R^4 grouped into 9 orthogonal bases,
each ray in exactly two bases (Cabello, Estebaranz, Garcia-Alcaine 1996).
Checks orthogonality and the incidence structure before writing."""

import itertools
import json
import pathlib

BASES = [
    [(0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0)],
    [(0, 0, 0, 1), (0, 1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0)],
    [(1, -1, 1, -1), (1, -1, -1, 1), (1, 1, 0, 0), (0, 0, 1, 1)],
    [(1, -1, 1, -1), (1, 1, 1, 1), (1, 0, -1, 0), (0, 1, 0, -1)],
    [(0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1), (1, 0, 0, -1)],
    [(1, -1, -1, 1), (1, 1, 1, 1), (1, 0, 0, -1), (0, 1, -1, 0)],
    [(1, 1, -1, 1), (1, 1, 1, -1), (1, -1, 0, 0), (0, 0, 1, 1)],
    [(1, 1, -1, 1), (-1, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, -1)],
    [(1, 1, 1, -1), (-1, 1, 1, 1), (1, 0, 0, 1), (0, 1, -1, 0)],
]


def canon(v):
    first = next(x for x in v if x != 0)
    return tuple(x if first > 0 else -x for x in v)


def main():
    rays = []
    for basis in BASES:
        for u, v in itertools.combinations(basis, 2):
            assert sum(a * b for a, b in zip(u, v)) == 0, (u, v)
        for v in basis:
            if canon(v) not in rays:
                rays.append(canon(v))
    assert len(rays) == 18, len(rays)
    for r in rays:
        n = sum(canon(v) == r for b in BASES for v in b)
        assert n == 2, (r, n)
    out = {
        "rays": [list(r) for r in rays],
        "bases": [[rays.index(canon(v)) for v in b] for b in BASES],
    }
    path = pathlib.Path(__file__).with_name("cabello18.json")
    path.write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
