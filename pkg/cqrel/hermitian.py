# -*- coding: utf-8 -*-
# Copyright (c) 2026  The cqrel developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

"""
Dense kernels on complex Hermitian matrices.

Every matrix handled here is desk-scale: an alphabet Gram matrix (a x a), an
averaged density operator (d x d) or a codebook Gram matrix (M x M).
Tolerances scale with the largest eigenvalue magnitude, floored at 1.
"""

from collections import namedtuple
from dataclasses import dataclass, field
from logging import getLogger

import numpy as np

from cqrel import conf
from cqrel.errors import NonHermitianInput, NotPSD

log = getLogger(__name__)

HERMITIAN_TOL = 1e-12
GRAM_PSD_TOL = 1e-10
GRAM_DIAGONAL_TOL = 1e-9

EigenSystem = namedtuple("EigenSystem", ["eigenvalues", "eigenvectors"])
SquareRoot = namedtuple("SquareRoot", ["matrix", "clamped"])


def _scale(values):
    """Largest magnitude in `values`, floored at 1."""
    if np.size(values) == 0:
        return 1.0
    return max(1.0, float(np.max(np.abs(values))))


def check_hermitian(H, tol=HERMITIAN_TOL):
    """
    Returns `H` as a square complex ndarray.

    :raises NonHermitianInput: when `H` is not square or deviates from its
        conjugate transpose by more than `tol` times its largest entry
        (floored at 1).
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] == 0:
        raise NonHermitianInput(
            "Expected a non-empty square matrix, got shape %r" % (H.shape,)
        )
    deviation = float(np.max(np.abs(H - H.conj().T)))
    if deviation > tol * _scale(H):
        raise NonHermitianInput(
            "Matrix is not Hermitian: max |H - H^dagger| = %.3e" % deviation
        )
    return H


def eig_hermitian(H):
    """
    Eigendecomposition of a Hermitian matrix.

    :param H: square array-like, Hermitian within 1e-12.
    :return: EigenSystem with real eigenvalues sorted ascending and the
        orthonormal eigenvectors as columns.
    :raises NonHermitianInput: if the symmetry tolerance is violated.
    """
    H = check_hermitian(H)
    eigenvalues, eigenvectors = np.linalg.eigh(H)
    return EigenSystem(eigenvalues, eigenvectors)


def clamp_eigenvalues(eigenvalues, clamp_tol=None):
    """
    Sets eigenvalues inside the clamping window to zero.

    The window is ``clamp_tol * max(1, max |eigenvalue|)``. Eigenvalues
    below minus the window are a hard error.

    :return: tuple (clamped eigenvalues, the original values that were
        clamped)
    :raises NotPSD: if an eigenvalue lies below the window.
    """
    if clamp_tol is None:
        clamp_tol = conf.clamp_tol
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    window = clamp_tol * _scale(eigenvalues)
    if np.any(eigenvalues < -window):
        raise NotPSD(
            "Matrix is not positive semidefinite: smallest eigenvalue %.3e "
            "is below -%.3e" % (float(eigenvalues.min()), window)
        )
    small = eigenvalues < window
    clamped = eigenvalues[small & (eigenvalues != 0.0)]
    if clamped.size:
        log.debug("Clamped %d eigenvalues to zero", clamped.size)
    return np.where(small, 0.0, eigenvalues), clamped


def psd_sqrt(H, clamp_tol=None):
    """
    Positive-semidefinite square root through the spectral mapping.

    :param H: Hermitian PSD matrix (within the clamping window).
    :param float clamp_tol: relative clamping window, defaults to
        ``conf.clamp_tol``.
    :return: SquareRoot(matrix, clamped) where `clamped` lists the
        eigenvalues set to zero.
    :raises NotPSD: if an eigenvalue is below the window.
    """
    eigenvalues, eigenvectors = eig_hermitian(H)
    eigenvalues, clamped = clamp_eigenvalues(eigenvalues, clamp_tol)
    root = (eigenvectors * np.sqrt(eigenvalues)) @ eigenvectors.conj().T
    # Hermitian by construction; remove rounding asymmetry.
    root = (root + root.conj().T) / 2
    return SquareRoot(root, clamped)


@dataclass
class GramDiagnostics:
    """Outcome of validate_gram."""

    hermitian: bool
    psd: bool
    unit_diagonal: bool
    bounded_overlaps: bool
    min_eigenvalue: float = float("nan")
    problems: list = field(default_factory=list)

    @property
    def valid(self):
        return (
            self.hermitian and self.psd and self.unit_diagonal and self.bounded_overlaps
        )


def validate_gram(G):
    """
    Checks that `G` can be the Gram matrix of unit vectors.

    Never raises; all findings are reported in the returned GramDiagnostics.
    """
    problems = []
    G = np.asarray(G, dtype=complex)
    if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] == 0:
        return GramDiagnostics(
            False, False, False, False, problems=["matrix is not square"]
        )

    hermitian = bool(
        np.max(np.abs(G - G.conj().T)) <= HERMITIAN_TOL * _scale(G)
    )
    if not hermitian:
        problems.append("not Hermitian")

    min_eigenvalue = float("nan")
    psd = False
    if hermitian:
        min_eigenvalue = float(np.linalg.eigvalsh(G)[0])
        psd = min_eigenvalue >= -GRAM_PSD_TOL
        if not psd:
            problems.append(
                "not positive semidefinite (min eigenvalue %.3e)" % min_eigenvalue
            )

    unit_diagonal = bool(np.all(np.abs(np.diag(G) - 1.0) <= GRAM_DIAGONAL_TOL))
    if not unit_diagonal:
        problems.append("diagonal is not 1")

    bounded_overlaps = bool(np.all(np.abs(G) <= 1.0 + GRAM_DIAGONAL_TOL))
    if not bounded_overlaps:
        problems.append("overlap magnitude exceeds 1")

    return GramDiagnostics(
        hermitian, psd, unit_diagonal, bounded_overlaps, min_eigenvalue, problems
    )
