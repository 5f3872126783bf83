"""Regenerate src/k3lat/data/witnesses.txt.

Isotropic constructions: in U + E8 with U-basis (u, u'), the vectors
e = u and f = u + m u' + v (v in E8 primitive, v.v = -2m) span U(m).
"""

import sys
from pathlib import Path

from k3lat import dsl, linalg
from k3lat.embeddings import EmbeddingWitness, find_embedding_definite
from k3lat.lattice import root_lattice
from k3lat.roots import perp_of_vector, short_vectors

E8 = root_lattice("E", 8)


def primitive_vector(norm):
    for v in short_vectors(E8, norm):
        if linalg.is_primitive(tuple((x,) for x in v)):
            return v
    raise SystemExit(f"no primitive E8 vector of norm {norm}")


def u_m_columns(m, v, pad=0):
    e = (1, 0) + (0,) * (8 + pad)
    f = (1, m) + tuple(v) + (0,) * pad
    return [e, f]


def a2_in_perp(v):
    """Columns (in E8 coordinates) of an A2 orthogonal to v."""
    perp = perp_of_vector(E8, v)
    basis = linalg.integer_kernel((linalg.matvec(E8.gram, v),))
    roots = short_vectors(perp, -2)
    roots = roots + [tuple(-x for x in r) for r in roots]
    to_e8 = lambda r: linalg.matvec(basis, r)
    for a in roots:
        for b in roots:
            if perp.product(a, b) == 1:
                yield to_e8(a), to_e8(b)


def record(sub_text, amb_text, cols):
    sub, amb = dsl.lattice(sub_text), dsl.lattice(amb_text)
    mat = linalg.transpose(cols)
    EmbeddingWitness(sub, amb, mat)  # validates
    lines = [f"sub: {sub_text}", f"ambient: {amb_text}"]
    lines += [" ".join(f"{x:3d}" for x in row) for row in mat]
    return "\n".join(lines)


def main(out):
    recs = []
    for text in ("A2(3)", "A3(2)"):
        w = find_embedding_definite(dsl.lattice(text), E8)
        recs.append(record(text, "E8", linalg.transpose(w.matrix)))
    for m in (3, 4):
        recs.append(record(f"U({m})", "U+E8", u_m_columns(m, primitive_vector(-2 * m))))
    for v in short_vectors(E8, -6):
        done = False
        for a, b in a2_in_perp(v):
            cols = u_m_columns(3, v) + [(0, 0) + tuple(a), (0, 0) + tuple(b)]
            if linalg.is_primitive(linalg.transpose(cols)):
                recs.append(record("U(3)+A2", "U+E8", cols))
                done = True
                break
        if done:
            break
    v = primitive_vector(-8)
    cols = u_m_columns(4, v, pad=8)
    d4 = [3, 4, 5, 2]  # E8 nodes 3-4-5 with 2 on the centre 4: a D4
    for node in d4:
        cols.append(tuple(int(i == 10 + node - 1) for i in range(18)))
    recs.append(record("U(4)+D4", "U+2E8", cols))
    header = "# Curated primitive embeddings; columns are images of the sub basis.\n\n"
    Path(out).write_text(header + "\n\n".join(recs) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/k3lat/data/witnesses.txt")
