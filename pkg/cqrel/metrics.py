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

from logging import getLogger

from prometheus_client import CollectorRegistry, Counter, write_to_textfile

from cqrel import conf

log = getLogger(__name__)

registry = CollectorRegistry()

codebooks_decoded = Counter(
    "cqrel_codebooks_decoded",
    "Number of codebooks decoded with the square-root measurement",
    registry=registry,
)

inequality_violations = Counter(
    "cqrel_inequality_violations",
    "Number of per-code inequality violations",
    labelnames=["check"],
    registry=registry,
)

verification_runs = Counter(
    "cqrel_verification_runs",
    "Number of verification runs",
    labelnames=["kind", "outcome"],
    registry=registry,
)


def write_metrics(path=None):
    """
    Writes the registry in the Prometheus text format to `path`, or to
    ``conf.metrics_file`` when `path` is None. Does nothing when neither is
    set.

    :return: True if a file was written.
    """
    if path is None:
        path = conf.metrics_file
    if not path:
        return False
    write_to_textfile(path, registry)
    log.debug("Metrics written to %s", path)
    return True
