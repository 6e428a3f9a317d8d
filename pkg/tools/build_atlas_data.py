"""Regenerate src/galois_atlas/data/atlas.txt.

Groups for X_0, Cartan normalizers and the determinant-character subgroups come from
the constructors in galois_atlas.gl2.  The S4 group at 5 is found as the order-96
overgroup of the split Cartan normalizer; 9.27.0.1 is found among lifts of GL2(Z/3)
to GL2(Z/9) containing the scalars 1 + 3Z/9 (order 144, level 9, genus 0).
"""
import itertools
import pathlib

from galois_atlas import gl2
from galois_atlas.gl2 import GL2Subgroup, format_generators, greedy_generators

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "galois_atlas" / "data" / "atlas.txt"


def s4_at_5():
    sp = gl2.split_cartan_normalizer(5)
    for g in gl2.gl2_elements(5):
        if g not in sp:
            K = GL2Subgroup(5, sp.gens + [g])
            if K.order == 96:
                return K
    raise RuntimeError("no S4 overgroup found")


def group_9_27():
    pair = next((a, b) for a in gl2.gl2_elements(3) for b in gl2.gl2_elements(3)
                if GL2Subgroup(3, [a, b]).order == 48)
    a, b = pair
    for d in itertools.product((0, 3, 6), repeat=4):
        lb = tuple((x + y) % 9 for x, y in zip(b, d))
        H = GL2Subgroup(9, [a, lb, (4, 0, 0, 4)])
        if H.order == 144 and H.det_surjective() and H.level() == 9 and H.genus() == 0:
            return H
    raise RuntimeError("no 9.27.0.1 candidate found")


def chi(values, modulus):
    return lambda d: 1 if d % modulus in values else -1


def main():
    rows = [
        ("2.2.0.1", "X_ns(2)", 2, "t^2 + 1728", gl2.nonsplit_cartan(2)),
        ("2.3.0.1", "X_0(2)", 2, "(256 - t)^3/t^2", gl2.borel(2)),
        ("4.2.0.1", "-", 2, "-t^2 + 1728", gl2.determinant_character_subgroup(4, chi({1}, 4))),
        ("4.4.0.1", "X_ns+(4)", 2, "4t^3(8 - t)", gl2.nonsplit_cartan(4, normalizer=True)),
        ("8.2.0.1", "-", 2, "-2t^2 + 1728", gl2.determinant_character_subgroup(8, chi({1, 3}, 8))),
        ("8.2.0.2", "-", 2, "2t^2 + 1728", gl2.determinant_character_subgroup(8, chi({1, 7}, 8))),
        ("3.3.0.1", "X_ns+(3)", 3, "t^3", gl2.nonsplit_cartan(3, normalizer=True)),
        ("3.4.0.1", "X_0(3)", 3, "(t + 3)^3(t + 27)/t", gl2.borel(3)),
        ("9.27.0.1", "-", 3,
         "3^7(t^2 - 1)^3(t^6 + 3t^5 + 6t^4 + t^3 - 3t^2 + 12t + 16)^3(2t^3 + 3t^2 - 3t - 5)/(t^3 - 3t - 1)^9",
         group_9_27()),
        ("5.5.0.1", "X_S4(5)", 5, "t^3(t^2 + 5t + 40)", s4_at_5()),
        ("5.6.0.1", "X_0(5)", 5, "(t^2 + 10t + 5)^3/t", gl2.borel(5)),
        ("5.10.0.1", "X_ns+(5)", 5, "8000t^3(t + 1)(t^2 - 5t + 10)^3/(t^2 - 5)^5",
         gl2.nonsplit_cartan(5, normalizer=True)),
        ("5.15.0.1", "X_sp+(5)", 5, "(t + 5)^3(t^2 - 5)^3(t^2 + 5t + 10)^3/(t^2 + 5t + 5)^5",
         gl2.split_cartan_normalizer(5)),
    ]
    lines = [
        "# label | name | ell | level | index | genus | jmap | generators",
        "# Twelve maximal closed subgroups of GL2(Z_ell), ell = 2, 3, 5, then auxiliary records (flag '*').",
    ]
    for label, name, ell, jmap, H in rows:
        level, index, genus, _ = label.split(".")
        gens = format_generators(H.N, greedy_generators(H.elements, H.N))
        aux = "*" if label == "5.15.0.1" else ""
        lines.append(f"{aux}{label} | {name} | {ell} | {level} | {index} | {genus} | {jmap} | {gens}")
    lines += [
        "@exceptional_j = -2^-3*5^2*241^3, -2^4*3^2*13^3, -2^-5*5*29^3, -2^-1*5^2, 2^4*3^3, 2^-15*5*211^3",
        "@cm_j = 0, 1728, -3375, 8000, -32768, 54000, 287496, -884736, -12288000, 16581375,"
        " -884736000, -147197952000, -262537412640768000",
    ]
    OUT.write_text("\n".join(lines) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
