"""Regenerate the sample JSON inputs used by the CLI tests and the README.

Run from the repository root: ``python3 samples/generate.py``.
"""

import json
import math
import pathlib
import sys

HERE = pathlib.Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent / "tests"))

from corpus import C3_MAX, OCTAHEDRON_MAX, TORUS9_MAX, TRIANGLE_MAX, torus9  # noqa: E402
from rootres.complex import edge_key  # noqa: E402
from rootres.covers import build_cover  # noqa: E402
from rootres.homology import cochain_to_json, cohomology  # noqa: E402


def write(name, doc):
    (HERE / name).write_text(json.dumps(doc, indent=1) + "\n")


def disk(winding):
    sims = [[i, (i + 1) % 6, 6] for i in range(6)]
    values = {str(i): [math.cos(2 * math.pi * winding * i / 6), math.sin(2 * math.pi * winding * i / 6)]
              for i in range(6)}
    values["6"] = [0.0, 0.0]
    return {"complex": {"simplices": sims}, "values": values}


def main():
    write("c3.json", {"simplices": C3_MAX})
    write("triangle_filled.json", {"simplices": TRIANGLE_MAX})
    write("octahedron.json", {"simplices": OCTAHEDRON_MAX})
    write("torus9.json", {"simplices": TORUS9_MAX})
    write("c3_winding1.json", {"complex": {"simplices": C3_MAX}, "winding": {edge_key(0, 1): 1}})
    write("c3_winding6.json", {"complex": {"simplices": C3_MAX},
                               "logs": {"0": [0.2, 0.5], "1": [0.0, 1.0], "2": [-0.3, 0.0]},
                               "winding": {edge_key(0, 1): 6}})
    write("c3_class1.json", {"degree": 1, "cochain": {edge_key(0, 1): 1}})
    T = torus9()
    H = cohomology(T, 1)
    for name, gen in zip("ab", H.basis):
        write(f"torus_basis_{name}.json", {"complex": {"simplices": TORUS9_MAX},
                                          "winding": cochain_to_json(T, 1, gen)})
    write("torus_double_cover.json", build_cover(T, [H.basis[0]], [2]).to_json())
    write("disk_winding0.json", disk(0))
    write("disk_winding1.json", disk(1))


if __name__ == "__main__":
    main()
