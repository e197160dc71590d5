#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

import importlib
import logging
import pkgutil

from .signal_model import DomainError

logger = logging.getLogger(__name__)

# Canonical detector order in reports
DETECTOR_NAMES = ("scan", "alr", "condensed_alr", "penalized_scan", "blocked_scan")


class DetectorModule:
    """Detector base class"""

    name = None  # The name of the detector, must be unique
    title = None
    # Full-family reductions the detector reads, see interval_stats.reduce_full
    reductions = ()
    # True if evaluate() returns BlockMaxima rather than a scalar statistic
    blocked = False

    def evaluate(self, s, reduction=None):
        raise NotImplementedError

    def describe(self, n):
        return {"name": self.name, "title": self.title or self.name}

    def __repr__(self):
        return "<%s %s>" % (self.__class__.__name__, self.name)


_loaded_modules = {}


def load_modules():
    from . import mods

    for info in pkgutil.iter_modules(mods.__path__):
        importlib.import_module("%s.%s" % (mods.__name__, info.name))
    for cls in DetectorModule.__subclasses__():
        if cls.name and cls.name not in _loaded_modules:
            _loaded_modules[cls.name] = cls()
            logger.debug("Loaded detector: %s", cls.name)
    return _loaded_modules


def get_module(name):
    if not _loaded_modules:
        load_modules()
    try:
        return _loaded_modules[name]
    except KeyError:
        raise DomainError("unknown detector %r" % name) from None


def get_modules(names=None):
    return [get_module(x) for x in (names or DETECTOR_NAMES)]


def resolve(detector):
    """Accept a detector name or a DetectorModule instance"""
    if isinstance(detector, DetectorModule):
        return detector
    return get_module(detector)


def needed_reductions(modules):
    needs = set()
    for m in modules:
        needs.update(m.reductions)
    return needs
