"""Regenerate the bundled corpus under src/vb0/data/corpus.

Run from the repository root:  python3 scripts/make_corpus.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

import numpy as np  # noqa: E402

from vb0.groups import (center, derived_subgroup, direct_product, format_group_text,  # noqa: E402
                        from_mul_table, from_permutations, parse_permutation, quotient,
                        Subgroup)

OUT = ROOT / "src" / "vb0" / "data" / "corpus"


def cycle(n: int, start: int = 1) -> str:
    return "(" + " ".join(str(start + i) for i in range(n)) + ")" if n > 1 else "()"


def perm_file(label: str, degree: int, gens: list[str], note: str = "") -> str:
    G = from_permutations(degree, [parse_permutation(g, degree) for g in gens], label=label)
    lines = [f"# label: {label}"]
    if note:
        lines.append(f"# {note}")
    lines.append(f"perm {degree}")
    lines.extend(gens)
    return "\n".join(lines) + "\n", G


def table_file(label: str, G, note: str = "") -> str:
    lines = [f"# label: {label}"]
    if note:
        lines.append(f"# {note}")
    lines.append(f"mtable {G.order}")
    lines.extend(" ".join(str(int(v)) for v in row) for row in G.table)
    return "\n".join(lines) + "\n", G


def dihedral_gens(n: int) -> list[str]:
    """Symmetries of an n-gon (order 2n)."""
    refl = []
    for i in range(1, n // 2 + 1):
        j = n + 1 - i
        if i < j:
            refl.append(f"({i} {j})")
    return [cycle(n), "".join(refl) or "()"]


def dicyclic(m: int):
    """Dicyclic group of order 4m: a^(2m) = 1, b^2 = a^m, b^-1 a b = a^-1.

    Elements a^i b^e are indexed ``e * 2m + i``.
    """
    n = 2 * m
    idx = lambda i, e: e * n + (i % n)  # noqa: E731
    table = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for e1 in range(2):
        for i in range(n):
            for e2 in range(2):
                for j in range(n):
                    # a^i b^e1 a^j b^e2 = a^(i + (-1)^e1 j) b^(e1 + e2), with b^2 = a^m
                    k = i + (j if e1 == 0 else -j)
                    e = e1 + e2
                    if e == 2:
                        k += m
                        e = 0
                    table[idx(i, e1), idx(j, e2)] = idx(k, e)
    return from_mul_table(table)


def central_product(A, B, za: int, zb: int):
    """``A x B`` modulo the diagonal copy of the central involutions ``za`` and ``zb``."""
    P = direct_product(A, B)
    z = za * B.order + zb
    Q, _ = quotient(P, Subgroup(P, [0, z]))
    return Q


def main():
    files: dict[str, tuple[str, object]] = {}
    for n in range(1, 33):
        files[f"cyclic_{n:02d}"] = perm_file(f"C{n}", max(n, 1), [cycle(n)] if n > 1 else [])
    files["klein_4"] = perm_file("C2 x C2", 4, ["(1 2)(3 4)", "(1 3)(2 4)"])
    files["elementary_8"] = perm_file("C2^3", 6, ["(1 2)", "(3 4)", "(5 6)"])
    files["elementary_16"] = perm_file("C2^4", 8, ["(1 2)", "(3 4)", "(5 6)", "(7 8)"])
    for n in range(3, 17):
        files[f"dihedral_{2 * n:02d}"] = perm_file(f"D{2 * n}", n, dihedral_gens(n))
    files["symmetric_3"] = perm_file("S3", 3, ["(1 2)", "(1 2 3)"])
    files["symmetric_4"] = perm_file("S4", 4, ["(1 2)", "(1 2 3 4)"])
    files["alternating_4"] = perm_file("A4", 4, ["(1 2)(3 4)", "(1 2 3)"])
    files["quaternion_08"] = perm_file("Q8", 8, ["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"])
    files["quaternion_16"] = table_file("Q16", dicyclic(4), "generalized quaternion, dicyclic with m = 4")
    files["dicyclic_12"] = table_file("Dic12", dicyclic(3), "C3 semidirect C4, the third nonabelian group of order 12")
    files["modular_16"] = perm_file("M16", 8, ["(1 2 3 4 5 6 7 8)", "(2 6)(4 8)"],
                                    "a^8 = b^2 = 1, b a b = a^5")
    files["semidihedral_16"] = perm_file("SD16", 8, ["(1 2 3 4 5 6 7 8)", "(2 4)(3 7)(6 8)"],
                                         "a^8 = b^2 = 1, b a b = a^3")
    Q8 = files["quaternion_08"][1]
    D8 = files["dihedral_08"][1]
    files["c2_x_quaternion_08"] = perm_file("C2 x Q8", 10, ["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)", "(9 10)"])
    files["c2_x_dihedral_08"] = perm_file("C2 x D8", 6, ["(1 2 3 4)", "(1 4)(2 3)", "(5 6)"])
    files["c2_x_c4"] = perm_file("C2 x C4", 6, ["(1 2)", "(3 4 5 6)"])
    files["c4_x_c4"] = perm_file("C4 x C4", 8, ["(1 2 3 4)", "(5 6 7 8)"])
    files["c3_x_c3"] = perm_file("C3 x C3", 6, ["(1 2 3)", "(4 5 6)"])
    files["c2_x_c6"] = perm_file("C2 x C6", 8, ["(1 2)", "(3 4 5 6 7 8)"])
    files["c4_x_c6"] = perm_file("C4 x C6", 10, ["(1 2 3 4)", "(5 6 7 8 9 10)"])
    files["c2_x_c2_x_c4"] = perm_file("C2 x C2 x C4", 8, ["(1 2)", "(3 4)", "(5 6 7 8)"])
    files["c2_x_c8"] = perm_file("C2 x C8", 10, ["(1 2)", "(3 4 5 6 7 8 9 10)"])
    ext_plus = central_product(D8, D8, _central_involution(D8), _central_involution(D8))
    ext_minus = central_product(D8, Q8, _central_involution(D8), _central_involution(Q8))
    files["extraspecial_32_plus"] = table_file("2^(1+4)+", ext_plus, "central product of D8 and D8")
    files["extraspecial_32_minus"] = table_file("2^(1+4)-", ext_minus, "central product of D8 and Q8")
    files["order64_b0_c2"] = perm_file(
        "G64 (B0 = C2)", 16,
        ["(1 4 2 3)(9 11)(10 12)(15 16)", "(1 2)(5 6)(7 8)(9 14 11 15 10 13 12 16)",
         "(1 4 2 3)(7 8)(9 16 10 15)(11 13 12 14)"],
        "stretch entry: both routes give B0 = C2, M = C2 x C4")
    files["order64_d8_x_d8"] = perm_file("D8 x D8", 8, ["(1 2 3 4)", "(1 4)(2 3)", "(5 6 7 8)", "(5 8)(6 7)"],
                                         "stretch entry")

    for name, (_, G) in files.items():
        assert G.order >= 1, name
    for name in ("extraspecial_32_plus", "extraspecial_32_minus"):
        G = files[name][1]
        assert G.order == 32 and center(G).order == 2 and derived_subgroup(G).order == 2, name
    expected = {"quaternion_16": 16, "dicyclic_12": 12, "modular_16": 16, "semidihedral_16": 16,
                "c2_x_quaternion_08": 16, "c2_x_dihedral_08": 16, "order64_b0_c2": 64,
                "order64_d8_x_d8": 64, "elementary_16": 16, "symmetric_4": 24, "alternating_4": 12}
    for name, order in expected.items():
        assert files[name][1].order == order, (name, files[name][1].order)

    OUT.mkdir(parents=True, exist_ok=True)
    for old in OUT.glob("*.txt"):
        old.unlink()
    for name, (text, _) in sorted(files.items()):
        (OUT / f"{name}.txt").write_text(text, encoding="utf-8")
    print(f"wrote {len(files)} groups to {OUT}")


def _central_involution(G) -> int:
    Z = center(G)
    return next(int(z) for z in Z.elements if G.element_orders[z] == 2)


if __name__ == "__main__":
    main()
