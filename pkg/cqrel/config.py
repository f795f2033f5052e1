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

import os
import sys

from importlib.machinery import SourceFileLoader

from cqrel import logger


def init_config():
    """
    Configure cqrel
    """
    config_module = None
    config_file = "/etc/cqrel/config.py"
    config_section = "ProdConfiguration"
    have_config_file = True

    try:
        with open(config_file):
            pass
    except (OSError, IOError):
        # Not an error for a command-line tool: the packaged defaults apply.
        have_config_file = False

    # try getting config_file from os.environ
    if "CQREL_CONFIG_FILE" in os.environ:
        config_file = os.environ["CQREL_CONFIG_FILE"]
        have_config_file = True
    # try getting config_section from os.environ
    if "CQREL_CONFIG_SECTION" in os.environ:
        config_section = os.environ["CQREL_CONFIG_SECTION"]
    # TestConfiguration shall only be used for running tests, otherwise...
    if any(["py.test" in arg or "pytest" in arg for arg in sys.argv]):
        config_section = "TestConfiguration"
        from conf import config

        config_module = config
    # ...CQREL_DEVELOPER_ENV has always the last word
    # and overrides anything previously set before!
    elif "CQREL_DEVELOPER_ENV" in os.environ and os.environ[
        "CQREL_DEVELOPER_ENV"
    ].lower() in ("1", "on", "true", "y", "yes"):
        config_section = "DevConfiguration"
        from conf import config

        config_module = config
    elif not have_config_file:
        from conf import config

        config_module = config
    # try loading configuration from file
    if not config_module:
        try:
            config_module = SourceFileLoader(
                "cqrel_runtime_config", config_file
            ).load_module()
        except Exception:
            raise SystemError(
                "Configuration file {} was not found.".format(config_file)
            )

    # finally configure cqrel
    config_section_obj = getattr(config_module, config_section)
    return Config(config_section_obj)


class Config(object):
    """Class representing the cqrel configuration."""

    _defaults = {
        "debug": {"type": bool, "default": False, "desc": "Debug mode"},
        "log_file": {"type": str, "default": "", "desc": "Path to log file"},
        "log_level": {"type": str, "default": "info", "desc": "Log level"},
        "clamp_tol": {
            "type": float,
            "default": 1e-12,
            "desc": "Relative window below which eigenvalues are clamped to zero.",
        },
        "s_cap": {
            "type": float,
            "default": 200.0,
            "desc": "Upper end of the s-search for the expurgated exponent.",
        },
        "root_tol": {
            "type": float,
            "default": 1e-10,
            "desc": "Residual at which the derivative root search stops.",
        },
        "root_xtol": {
            "type": float,
            "default": 1e-12,
            "desc": "Interval width at which the derivative root search stops.",
        },
        "golden_tol": {
            "type": float,
            "default": 1e-10,
            "desc": "Interval width at which golden-section search stops.",
        },
        "grid_step_small": {
            "type": float,
            "default": 0.01,
            "desc": "Simplex lattice step for alphabets of size 3 or less.",
        },
        "grid_step_large": {
            "type": float,
            "default": 0.04,
            "desc": "Simplex lattice step for alphabets of size 4 to 6.",
        },
        "refine_iterations": {
            "type": int,
            "default": 500,
            "desc": "Maximum downhill-simplex iterations per refinement.",
        },
        "refine_top": {
            "type": int,
            "default": 5,
            "desc": "Number of best lattice points refinement starts from.",
        },
        "refine_xtol": {
            "type": float,
            "default": 1e-10,
            "desc": "Step tolerance of the downhill-simplex refinement.",
        },
        "max_alphabet": {
            "type": int,
            "default": 6,
            "desc": "Largest alphabet the simplex optimizer accepts.",
        },
        "max_codewords": {
            "type": int,
            "default": 512,
            "desc": "Largest codebook the decoding oracle accepts.",
        },
        "max_samples": {
            "type": int,
            "default": 1000000,
            "desc": "Largest number of sampled codebooks per verification run.",
        },
        "stat_margin": {
            "type": float,
            "default": 3.0,
            "desc": "Standard errors allowed between empirical mean and bound.",
        },
        "threads": {
            "type": int,
            "default": 1,
            "desc": "Worker threads; never changes any result.",
        },
        "metrics_file": {
            "type": str,
            "default": "",
            "desc": "Prometheus textfile written after verification runs.",
        },
    }

    def __init__(self, conf_section_obj):
        """
        Initialize the Config object with defaults and then override them
        with runtime values.
        """

        # read items from conf and set
        for key in dir(conf_section_obj):
            # skip keys starting with underscore
            if key.startswith("_"):
                continue
            # set item (lower key)
            self.set_item(key.lower(), getattr(conf_section_obj, key))

        # set item from defaults if the item is not set
        for name, values in self._defaults.items():
            if hasattr(self, name):
                continue
            self.set_item(name, values["default"])

    def set_item(self, key, value):
        """
        Set value for configuration item. Creates the self._key = value
        attribute and self.key property to set/get/del the attribute.
        """
        if key == "set_item" or key.startswith("_"):
            raise Exception("Configuration item's name is not allowed: %s" % key)

        # Create the empty self._key attribute, so we can assign to it.
        setattr(self, "_" + key, None)

        # Create self.key property to access the self._key attribute.
        # Use the setifok_func if available for the attribute.
        setifok_func = "_setifok_{}".format(key)
        if hasattr(self, setifok_func):
            setx = lambda self, val: getattr(self, setifok_func)(val)
        else:
            setx = lambda self, val: setattr(self, "_" + key, val)
        getx = lambda self: getattr(self, "_" + key)
        delx = lambda self: delattr(self, "_" + key)
        setattr(Config, key, property(getx, setx, delx))

        # managed/registered configuration items
        if key in self._defaults:
            # type conversion for configuration item
            convert = self._defaults[key]["type"]
            if convert in [bool, int, list, str, set, dict, float]:
                try:
                    # Do no try to convert None...
                    if value is not None:
                        value = convert(value)
                except Exception:
                    raise TypeError(
                        "Configuration value conversion failed for name: %s" % key
                    )
            # unknown type/unsupported conversion
            elif convert is not None:
                raise TypeError(
                    "Unsupported type %s for configuration item name: %s"
                    % (convert, key)
                )

        # Set the attribute to the correct value
        setattr(self, key, value)

    #
    # Register your _setifok_* handlers here
    #

    def _setifok_log_file(self, s):
        if s is None:
            self._log_file = ""
        else:
            self._log_file = str(s)

    def _setifok_log_level(self, s):
        level = str(s).lower()
        self._log_level = logger.str_to_log_level(level)

    def _setifok_threads(self, n):
        n = int(n)
        if n < 1:
            raise ValueError("threads must be at least 1, got %d" % n)
        self._threads = n

    def _setifok_clamp_tol(self, tol):
        tol = float(tol)
        if not 0.0 <= tol < 1.0:
            raise ValueError("clamp_tol must lie in [0, 1), got %r" % tol)
        self._clamp_tol = tol

    def _setifok_s_cap(self, s_cap):
        s_cap = float(s_cap)
        if s_cap <= 1.0:
            raise ValueError("s_cap must exceed 1, got %r" % s_cap)
        self._s_cap = s_cap

    def _setifok_max_alphabet(self, a):
        a = int(a)
        if a < 1:
            raise ValueError("max_alphabet must be positive, got %d" % a)
        self._max_alphabet = a
