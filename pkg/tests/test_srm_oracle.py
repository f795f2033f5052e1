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

import math
import unittest

import numpy as np

from cqrel.channel import ChannelSpec
from cqrel.errors import (
    DimensionTooLarge,
    DomainError,
    LengthMismatch,
    RepresentationUnavailable,
    ValidationError,
)
from cqrel.hermitian import psd_sqrt
from cqrel.srm_oracle import (
    CodeGram,
    Codebook,
    check_inequalities,
    code_gram,
    code_zero_rate_estimate,
    decode_codebook,
    gram_operator_trace_sqrt,
    helstrom_pair_lower,
    helstrom_quarter_lower,
    max_offdiagonal_overlap,
    pairwise_union_bound,
    product_overlap,
    sample_codebook,
    srm_decode,
    union_bounds,
)

from utils import (
    binary_states,
    binary_vectors,
    identical_channel,
    orthogonal_channel,
    random_channel,
    random_prior,
)


def equicorrelated(M, gamma):
    """Codebook Gram matrix with every off-diagonal overlap equal to gamma."""
    return CodeGram((1 - gamma) * np.eye(M) + gamma * np.ones((M, M)))


class TestProductOverlap(unittest.TestCase):
    def test_values(self):
        ch = binary_states(0.5)
        self.assertAlmostEqual(product_overlap([0, 1], [0, 1], ch), 1.0)
        self.assertAlmostEqual(product_overlap([0, 0], [1, 1], ch), 0.25)
        self.assertEqual(product_overlap([0, 1], [1, 1], orthogonal_channel(2)), 0)

    def test_length_mismatch(self):
        with self.assertRaises(LengthMismatch):
            product_overlap([0, 1], [0, 1, 1], binary_states(0.5))

    def test_letter_out_of_range(self):
        with self.assertRaises(ValidationError):
            product_overlap([0, 2], [0, 1], binary_states(0.5))


class TestCodebook(unittest.TestCase):
    def test_shape(self):
        cb = Codebook([[0, 1, 1], [1, 0, 0]], binary_states(0.5))
        self.assertEqual((cb.M, cb.n), (2, 3))

    def test_letter_out_of_range(self):
        with self.assertRaises(ValidationError):
            Codebook([[0, 3]], binary_states(0.5))

    def test_code_gram(self):
        ch = binary_states(0.5)
        g = code_gram(Codebook([[0, 0], [1, 1], [0, 1]], ch))
        expected = [[1, 0.25, 0.5], [0.25, 1, 0.5], [0.5, 0.5, 1]]
        np.testing.assert_allclose(g.matrix, expected, atol=1e-15)

    def test_code_gram_has_unit_diagonal(self):
        ch = ChannelSpec.from_vectors(binary_vectors(0.5) * (1 + 4.9e-10))
        for index in range(20):
            g = code_gram(sample_codebook(ch, None, 6, 8, seed=8, index=index))
            np.testing.assert_array_equal(np.diag(g.matrix), np.ones(6))

    def test_code_gram_matches_product_overlap(self):
        rng = np.random.default_rng(17)
        ch = random_channel(rng, 3, 2)
        cb = sample_codebook(ch, None, 5, 4, seed=3, index=0)
        g = code_gram(cb)
        for k in range(cb.M):
            for j in range(cb.M):
                self.assertAlmostEqual(
                    g.matrix[k, j], product_overlap(cb.words[k], cb.words[j], ch)
                )


class TestSrmDecode(unittest.TestCase):
    def test_two_states(self):
        result = decode_codebook(Codebook([[0], [1]], binary_states(0.6)))
        np.testing.assert_allclose(result.per_word_error, [0.1, 0.1], atol=1e-12)
        self.assertAlmostEqual(result.average, 0.1, places=12)
        self.assertAlmostEqual(result.max, 0.1, places=12)
        self.assertAlmostEqual(result.gram_bound, 0.1026334, places=7)

    def test_orthogonal_words_are_error_free(self):
        cb = Codebook([[0, 1], [1, 0], [1, 1]], orthogonal_channel(2))
        result = decode_codebook(cb)
        np.testing.assert_allclose(result.per_word_error, 0.0, atol=1e-12)
        self.assertAlmostEqual(result.gram_bound, 0.0, places=12)

    def test_duplicate_words(self):
        result = decode_codebook(Codebook([[1, 0], [1, 0]], binary_states(0.5)))
        np.testing.assert_allclose(result.per_word_error, [0.5, 0.5], atol=1e-12)

    def test_identical_states(self):
        result = decode_codebook(Codebook([[0], [1], [1]], identical_channel(2)))
        np.testing.assert_allclose(result.per_word_error, 2 / 3, atol=1e-12)

    def test_single_word(self):
        result = srm_decode(CodeGram(np.ones((1, 1))))
        self.assertEqual(result.average, 0.0)

    def test_single_word_of_a_codebook(self):
        result = decode_codebook(Codebook([[0, 1, 1, 0]], binary_states(0.5)))
        self.assertEqual(result.average, 0.0)
        self.assertEqual(result.gram_bound, 0.0)

    def test_pair_decoding_is_optimal(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            a = int(rng.integers(2, 4))
            n = int(rng.integers(1, 7))
            ch = random_channel(rng, a, int(rng.integers(2, 4)))
            g = code_gram(Codebook(rng.integers(0, a, size=(2, n)), ch))
            result = srm_decode(g)
            optimum = helstrom_pair_lower(g)
            self.assertAlmostEqual(result.average, optimum, delta=1e-10)
            np.testing.assert_allclose(result.per_word_error, optimum, atol=1e-10)


class TestLowerAndUnionBounds(unittest.TestCase):
    def test_helstrom(self):
        g = equicorrelated(2, 0.6)
        self.assertAlmostEqual(max_offdiagonal_overlap(g), 0.6)
        self.assertAlmostEqual(helstrom_pair_lower(g), 0.1, places=12)
        self.assertAlmostEqual(helstrom_quarter_lower(g), 0.09, places=12)
        self.assertLessEqual(helstrom_quarter_lower(g), helstrom_pair_lower(g))

    def test_single_word_has_no_pair(self):
        g = CodeGram(np.ones((1, 1)))
        self.assertEqual(max_offdiagonal_overlap(g), 0.0)
        self.assertEqual(helstrom_pair_lower(g), 0.0)

    def test_union_bounds(self):
        np.testing.assert_allclose(union_bounds(equicorrelated(5, 0.3)), 0.36)
        self.assertAlmostEqual(pairwise_union_bound(equicorrelated(3, 0.3), 1), 0.18)
        with self.assertRaises(ValidationError):
            pairwise_union_bound(equicorrelated(3, 0.3), 3)

    def test_zero_rate_estimate(self):
        self.assertAlmostEqual(
            code_zero_rate_estimate(equicorrelated(3, 0.25), 2), math.log(4), places=12
        )
        self.assertEqual(code_zero_rate_estimate(CodeGram(np.eye(3)), 2), math.inf)
        with self.assertRaises(DomainError):
            code_zero_rate_estimate(CodeGram(np.eye(3)), 0)


class TestGramOperator(unittest.TestCase):
    def test_matches_code_gram(self):
        rng = np.random.default_rng(31)
        ch = random_channel(rng, 3, 2)
        for index in range(5):
            cb = sample_codebook(ch, None, 4, 3, seed=11, index=index)
            expected = float(np.real(np.trace(psd_sqrt(code_gram(cb).matrix).matrix)))
            self.assertAlmostEqual(gram_operator_trace_sqrt(cb), expected, delta=1e-8)

    def test_needs_state_vectors(self):
        ch = ChannelSpec.from_gram([[1, 0.5], [0.5, 1]])
        with self.assertRaises(RepresentationUnavailable):
            gram_operator_trace_sqrt(Codebook([[0, 1]], ch))

    def test_dimension_cap(self):
        cb = Codebook(np.zeros((2, 13), dtype=int), binary_states(0.5))
        with self.assertRaises(DimensionTooLarge):
            gram_operator_trace_sqrt(cb)


class TestSampleCodebook(unittest.TestCase):
    def test_deterministic_prior(self):
        ch = binary_states(0.5)
        for seed in (0, 1, 2**64 - 1):
            cb = sample_codebook(ch, [1.0, 0.0], 3, 5, seed, 0)
            self.assertFalse(cb.words.any())

    def test_same_seed_and_index(self):
        ch = orthogonal_channel(3)
        first = sample_codebook(ch, None, 8, 6, 42, 5)
        second = sample_codebook(ch, None, 8, 6, 42, 5)
        np.testing.assert_array_equal(first.words, second.words)

    def test_streams_differ(self):
        ch = orthogonal_channel(3)
        base = sample_codebook(ch, None, 8, 6, 42, 0).words
        other = sample_codebook(ch, None, 8, 6, 42, 1).words
        self.assertFalse(np.array_equal(base, other))
        other = sample_codebook(ch, None, 8, 6, 43, 0).words
        self.assertFalse(np.array_equal(base, other))

    def test_letter_frequencies(self):
        prior = [0.2, 0.3, 0.5]
        cb = sample_codebook(orthogonal_channel(3), prior, 1000, 100, 2026, 0)
        counts = np.bincount(cb.words.ravel(), minlength=3) / cb.words.size
        for p, freq in zip(prior, counts):
            sigma = math.sqrt(p * (1 - p) / cb.words.size)
            self.assertLess(abs(freq - p), 4 * sigma)

    def test_seed_required(self):
        with self.assertRaises(ValidationError):
            sample_codebook(binary_states(0.5), None, 2, 2, None, 0)


class TestPerCodeInequalities(unittest.TestCase):
    def test_random_codebooks(self):
        rng = np.random.default_rng(4)
        channels = [
            binary_states(0.5),
            binary_states(0.9),
            random_channel(rng, 3, 2),
            random_channel(rng, 3, 3),
        ]
        priors = [random_prior(rng, ch.alphabet_size) for ch in channels]
        flagged = 0
        for index in range(10000):
            which = index % len(channels)
            M = int(rng.integers(2, 65))
            n = int(rng.integers(1, 9))
            cb = sample_codebook(channels[which], priors[which], M, n, 99, index)
            outcome = check_inequalities(code_gram(cb))
            result = outcome.result
            self.assertLessEqual(result.average, result.max + 1e-15)
            flagged += outcome.eq6 + outcome.union + outcome.helstrom
        self.assertEqual(flagged, 0)

    def test_norm_within_tolerance(self):
        ch = ChannelSpec.from_vectors(binary_vectors(0.5) * (1 + 4.9e-10))
        for index in range(200):
            cb = sample_codebook(ch, None, 2 + index % 15, 8, 5, index)
            outcome = check_inequalities(code_gram(cb))
            self.assertFalse(outcome.eq6 or outcome.union or outcome.helstrom)
