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

import json
import math
import os
import shutil
import tempfile
import unittest
from unittest.mock import patch

import numpy as np

from cqrel.channel import ChannelSpec, Prior


class ConfigPatcher(object):
    def __init__(self, config_obj):
        self.objects = []
        self.config_obj = config_obj

    def patch(self, key, value):
        try:
            obj = patch.object(self.config_obj, key, new=value)
        except Exception:
            self.stop()
            raise
        self.objects.append(obj)

    def start(self):
        for obj in self.objects:
            obj.start()

    def stop(self):
        for obj in self.objects:
            obj.stop()


def binary_vectors(epsilon):
    """Two real unit vectors with overlap epsilon."""
    return np.array([[1.0, 0.0], [epsilon, math.sqrt(1.0 - epsilon**2)]])


def binary_states(epsilon, prior=None):
    return ChannelSpec.from_vectors(binary_vectors(epsilon), prior=prior)


def orthogonal_channel(k):
    return ChannelSpec.from_vectors(np.eye(k))


def identical_channel(a, d=2):
    vector = np.zeros(d)
    vector[0] = 1.0
    return ChannelSpec.from_vectors(np.tile(vector, (a, 1)))


def random_vectors(rng, a, d):
    vectors = rng.normal(size=(a, d)) + 1j * rng.normal(size=(a, d))
    return vectors / np.linalg.norm(vectors, axis=1)[:, None]


def random_channel(rng, a, d):
    return ChannelSpec.from_vectors(random_vectors(rng, a, d))


def random_prior(rng, a):
    return Prior.from_weights(rng.dirichlet(np.ones(a)), normalize=True)


def states_document(vectors, prior=None):
    vectors = np.asarray(vectors, dtype=complex)
    document = {
        "format": "states",
        "states": {
            "dim": vectors.shape[1],
            "vectors": [
                {"re": v.real.tolist(), "im": v.imag.tolist()} for v in vectors
            ],
        },
    }
    if prior is not None:
        document["prior"] = list(prior)
    return document


def gram_document(gram, prior=None):
    gram = np.asarray(gram, dtype=complex)
    document = {
        "format": "gram",
        "gram": {"re": gram.real.tolist(), "im": gram.imag.tolist()},
    }
    if prior is not None:
        document["prior"] = list(prior)
    return document


class TempDirTest(unittest.TestCase):
    """Test case with a scratch directory for input and output files."""

    def setUp(self):
        super(TempDirTest, self).setUp()
        self.tmpdir = tempfile.mkdtemp(prefix="cqrel-test-")

    def tearDown(self):
        super(TempDirTest, self).tearDown()
        shutil.rmtree(self.tmpdir)

    def path(self, name):
        return os.path.join(self.tmpdir, name)

    def write_json(self, name, document):
        path = self.path(name)
        with open(path, "w") as f:
            json.dump(document, f)
        return path

    def read(self, name):
        with open(self.path(name), "r") as f:
            return f.read()
