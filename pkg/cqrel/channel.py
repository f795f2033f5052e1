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
Channel specification, priors and the averaged density operator.

A channel maps letter i of a finite alphabet to the pure state |psi_i>. It
is held either as the state vectors themselves or only as their Gram matrix
G_ik = <psi_i|psi_k>; every bound in this package depends on the states only
through G.
"""

from dataclasses import dataclass
from logging import getLogger
from typing import Optional

import numpy as np

from cqrel.errors import RepresentationUnavailable, ValidationError
from cqrel.hermitian import clamp_eigenvalues, eig_hermitian, psd_sqrt, validate_gram
from cqrel.schemas import ChannelFileSchema, PriorFileSchema, parse_document

log = getLogger(__name__)

NORM_TOL = 1e-9
PRIOR_TOL = 1e-12
SPECTRUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Prior:
    """Probability vector over the input alphabet."""

    weights: np.ndarray

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if weights.size == 0:
            raise ValidationError("Prior must not be empty")
        if not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise ValidationError("Prior weights must be finite and nonnegative")
        if abs(float(weights.sum()) - 1.0) > PRIOR_TOL:
            raise ValidationError(
                "Prior weights sum to %.17g, not 1" % float(weights.sum())
            )
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, a):
        return cls(np.full(a, 1.0 / a))

    @classmethod
    def from_weights(cls, weights, normalize=False):
        """
        Builds a prior from raw weights.

        :param bool normalize: divide by the sum first (for optimizer output
            which is normalized only up to rounding).
        """
        weights = np.asarray(weights, dtype=float)
        if normalize:
            weights = np.clip(weights, 0.0, None)
            total = weights.sum()
            if total <= 0:
                raise ValidationError("Prior weights must not all vanish")
            weights = weights / total
        return cls(weights)

    def __len__(self):
        return self.weights.size

    def tolist(self):
        return [float(w) for w in self.weights]


def as_prior(prior, a=None):
    """Coerces a Prior, a sequence of weights or None (uniform) to a Prior."""
    if prior is None:
        if a is None:
            raise ValidationError("Alphabet size needed for a uniform prior")
        return Prior.uniform(a)
    if not isinstance(prior, Prior):
        prior = Prior(prior)
    if a is not None and len(prior) != a:
        raise ValidationError(
            "Prior has %d weights but the alphabet has %d letters" % (len(prior), a)
        )
    return prior


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues of the averaged density operator; a probability vector."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        eigenvalues = np.asarray(self.eigenvalues, dtype=float).reshape(-1)
        if np.any(eigenvalues < 0):
            raise ValidationError("Spectrum must be nonnegative")
        if abs(float(eigenvalues.sum()) - 1.0) > SPECTRUM_TOL:
            raise ValidationError(
                "Spectrum sums to %.17g, not 1" % float(eigenvalues.sum())
            )
        eigenvalues.setflags(write=False)
        object.__setattr__(self, "eigenvalues", eigenvalues)

    def nonzero(self, floor=0.0):
        """Eigenvalues strictly above `floor`, sorted ascending."""
        return np.sort(self.eigenvalues[self.eigenvalues > floor])


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    """
    Pure-state channel.

    `gram` is always present; `vectors` (a x d, one state per row) only for
    the StateVectors representation.
    """

    gram: np.ndarray
    vectors: Optional[np.ndarray] = None
    default_prior: Optional[Prior] = None

    @property
    def alphabet_size(self):
        return self.gram.shape[0]

    @property
    def dim(self):
        return None if self.vectors is None else self.vectors.shape[1]

    @property
    def has_states(self):
        return self.vectors is not None

    @property
    def representation(self):
        return "states" if self.has_states else "gram"

    @classmethod
    def from_vectors(cls, vectors, prior=None):
        """
        :param vectors: a x d array-like; row i is |psi_i>.
        :raises ValidationError: if a vector is not normalized within 1e-9 or
            the derived Gram matrix is invalid.
        """
        vectors = np.array(vectors, dtype=complex, ndmin=2)
        if vectors.ndim != 2 or vectors.shape[1] == 0:
            raise ValidationError("State vectors must form an a x d array")
        norms = np.linalg.norm(vectors, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1.0) > NORM_TOL)
        if bad.size:
            raise ValidationError(
                "State vector %d is not normalized (norm %.17g)"
                % (bad[0], norms[bad[0]])
            )
        # Rescaled within the accepted tolerance: G_ii == 1 exactly.
        vectors = vectors / norms[:, None]
        gram = vectors.conj() @ vectors.T
        _require_valid_gram(gram)
        gram = _unit_diagonal(gram)
        vectors.setflags(write=False)
        gram.setflags(write=False)
        prior = None if prior is None else as_prior(prior, vectors.shape[0])
        return cls(gram=gram, vectors=vectors, default_prior=prior)

    @classmethod
    def from_gram(cls, gram, prior=None):
        """
        :param gram: a x a array-like with G_ik = <psi_i|psi_k>.
        :raises ValidationError: naming the failed Gram invariant.
        """
        gram = np.array(gram, dtype=complex, ndmin=2)
        _require_valid_gram(gram)
        gram = _unit_diagonal(gram)
        gram.setflags(write=False)
        prior = None if prior is None else as_prior(prior, gram.shape[0])
        return cls(gram=gram, default_prior=prior)

    def prior_or_default(self, prior=None):
        if prior is None:
            prior = self.default_prior
        return as_prior(prior, self.alphabet_size)


def _require_valid_gram(gram):
    diagnostics = validate_gram(gram)
    if not diagnostics.valid:
        raise ValidationError(
            "Invalid Gram matrix: %s" % ", ".join(diagnostics.problems)
        )


def _unit_diagonal(gram):
    """Exactly Hermitian copy of a validated Gram matrix with G_ii = 1."""
    gram = (gram + gram.conj().T) / 2
    np.fill_diagonal(gram, 1.0)
    return gram


def load_channel(document):
    """
    Parses a channel file (JSON text or decoded dict).

    :raises ParseError: on malformed documents.
    :raises ValidationError: with the failing invariant named.
    """
    data = parse_document(document, ChannelFileSchema())
    prior = data.get("prior")
    if data["format"] == "states":
        vectors = [_complex_array(v) for v in data["states"]["vectors"]]
        ch = ChannelSpec.from_vectors(vectors, prior=prior)
    else:
        gram = _complex_array(data["gram"])
        ch = ChannelSpec.from_gram(gram, prior=prior)
    log.debug(
        "Loaded %s channel with %d letters", ch.representation, ch.alphabet_size
    )
    return ch


def load_channel_file(path):
    with open(path, "r") as f:
        return load_channel(f.read())


def load_prior(document, a=None):
    """Parses a prior file ({"prior": [...]}) into a Prior."""
    data = parse_document(document, PriorFileSchema())
    return as_prior(data["prior"], a)


def load_prior_file(path, a=None):
    with open(path, "r") as f:
        return load_prior(f.read(), a)


def _complex_array(data):
    re = np.asarray(data["re"], dtype=float)
    if data.get("im") is None:
        return re + 0j
    return re + 1j * np.asarray(data["im"], dtype=float)


def average_state(ch, prior=None):
    """
    The averaged density operator S = sum_i pi_i |psi_i><psi_i|.

    :return: d x d Hermitian PSD ndarray with unit trace.
    :raises RepresentationUnavailable: for Gram-only channels.
    """
    if not ch.has_states:
        raise RepresentationUnavailable(
            "The averaged operator needs state vectors; this channel is Gram-only"
        )
    prior = ch.prior_or_default(prior)
    vectors = ch.vectors
    return (vectors.T * prior.weights) @ vectors.conj()


def weighted_gram(ch, prior=None):
    """W_ik = sqrt(pi_i) sqrt(pi_k) G_ik; shares the nonzero spectrum of S."""
    prior = ch.prior_or_default(prior)
    root = np.sqrt(prior.weights)
    return root[:, None] * ch.gram * root[None, :]


def spectrum(ch, prior=None):
    """
    Eigenvalues of the averaged density operator.

    State-vector channels diagonalize the d x d operator; Gram-only
    channels the a x a weighted Gram matrix. Both agree on the nonzero
    eigenvalues.
    """
    if ch.has_states:
        matrix = average_state(ch, prior)
    else:
        matrix = weighted_gram(ch, prior)
    eigenvalues, _ = eig_hermitian(matrix)
    eigenvalues, _ = clamp_eigenvalues(eigenvalues)
    return Spectrum(eigenvalues)


def entropy(sp):
    """
    Von Neumann entropy -sum lambda ln lambda in nats, with 0 ln 0 = 0.
    """
    values = sp.eigenvalues[sp.eigenvalues > 0]
    if values.size == 0:
        return 0.0
    return max(0.0, float(-np.sum(values * np.log(values))))


def embed_states(ch):
    """
    Unit vectors realizing the channel, one per row.

    Gram-only channels are embedded through the columns of G^{1/2}, whose
    inner products reproduce G.
    """
    if ch.has_states:
        return np.array(ch.vectors)
    root = psd_sqrt(ch.gram).matrix
    # Row i is column i of G^{1/2}, so rows.conj() @ rows.T == G.
    return root.T.copy()
