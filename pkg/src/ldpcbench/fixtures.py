"""Small reference codes used by tests, the CLI and the examples in the README."""

from __future__ import annotations

from importlib import resources

from .codes import LinearCode, QcPolynomialMatrix, qc_expand_circulant
from .gf2 import BitMatrix, row_basis
from .io import parse_alist, parse_qc


def _data(name: str) -> str:
    return resources.files("ldpcbench").joinpath("data", name).read_text()


def data_path(name: str):
    return resources.files("ldpcbench").joinpath("data", name)


def extended_hamming8() -> LinearCode:
    """[8,4,4] extended Hamming code, first-order Reed-Muller form of H."""
    H = BitMatrix.from_array([
        [1, 1, 1, 1, 1, 1, 1, 1],
        [0, 0, 0, 0, 1, 1, 1, 1],
        [0, 0, 1, 1, 0, 0, 1, 1],
        [0, 1, 0, 1, 0, 1, 0, 1],
    ])
    return LinearCode(H, name="ehamming8")


def repetition(n: int) -> LinearCode:
    """[n,1,n] repetition code; check i ties bit 0 to bit i+1."""
    H = BitMatrix.from_supports(([0, i] for i in range(1, n)), n)
    return LinearCode(H, name=f"rep{n}")


def tree_code() -> LinearCode:
    """Three checks on seven bits, chained through bits 2 and 4; the Tanner graph is a tree."""
    H = BitMatrix.from_supports([[0, 1, 2], [2, 3, 4], [4, 5, 6]], 7)
    return LinearCode(H, name="tree7")


def xqr48_cyclic_generator() -> BitMatrix:
    """Generator of the [48,24,12] extended quadratic-residue code.

    Span of the cyclic shifts of the indicator of the quadratic residues mod
    47, each word extended by an overall parity bit in position 47.
    """
    p = 47
    residues = {(x * x) % p for x in range(1, p)}
    shifts = []
    for s in range(p):
        v = 0
        for j in residues:
            v |= 1 << ((j + s) % p)
        shifts.append(v)
    G = row_basis(BitMatrix(shifts, p))
    return BitMatrix((v | ((v.bit_count() & 1) << p) for v in G.row_ints), p + 1)


def xqr48() -> LinearCode:
    """Extended QR code with a low-density parity-check matrix.

    The 24 rows are weight-12 codewords (the code is self-dual) chosen by a
    local search for balanced column weights and small row overlaps; see
    ``tools/make_fixtures.py``.
    """
    return LinearCode(parse_alist(_data("xqr48.alist")), name="xqr48")


def qc48_matrix() -> QcPolynomialMatrix:
    """(3,6)-regular 6 x 12 exponent matrix, lifting degree 4."""
    return parse_qc(_data("qc48.qc"))


def qc48() -> LinearCode:
    """[48,24] QC LDPC code of girth 6 (circulant form of ``qc48_matrix``)."""
    code = qc_expand_circulant(qc48_matrix())
    return LinearCode(code.H, name="qc48", meta=code.meta)


BUILTIN = {
    "xqr48": xqr48,
    "qc48": qc48,
    "ehamming8": extended_hamming8,
    "tree7": tree_code,
}
