#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

"""
Progress events.

Long computations (null simulations, power grids, pilots, benchmarks)
announce their milestones by name.  The CLI subscribes to every event and
logs it; tests subscribe to single events to check cache hits and ordering.
"""

import logging

logger = logging.getLogger(__name__)

# event name (None for all events) -> subscribed callables
_handlers = {}

# event name -> {parameter name: description}
_events = {}


def register_handler(event, handler):
    """Subscribe handler(event, **params) to one event, or to all if None.

    Subscribing the same handler twice has no effect."""
    subscribers = _handlers.setdefault(event, [])
    if handler not in subscribers:
        subscribers.append(handler)


def unregister_handler(event, handler):
    subscribers = _handlers.get(event, [])
    if handler in subscribers:
        subscribers.remove(handler)


def declare_event(event, **params):
    """Make an event known, mapping each parameter name to its description"""
    if event in _events:
        raise ValueError("event %s is already declared" % event)
    _events[event] = params


def emit_event(event, **params):
    """Pass params to the subscribers of event.

    A failing subscriber is logged and skipped; it never interrupts the
    computation that emitted the event."""
    if event not in _events:
        raise KeyError("undeclared event %s" % event)
    unknown = sorted(set(params) - set(_events[event]))
    if unknown:
        raise ValueError(
            "event %s has no parameters %s" % (event, ", ".join(unknown))
        )
    for handler in _handlers.get(event, []) + _handlers.get(None, []):
        try:
            handler(event, **params)
        except Exception:
            logger.exception("Event handler %r failed on %s", handler, event)


def get_events_info():
    return dict(_events)


declare_event(
    "NullSimulationComplete",
    detectors="names of the detectors simulated together",
    n="sample size",
    mc_samples="number of null replicates",
    elapsed="wall time in seconds",
)
declare_event(
    "CriticalValuesReady",
    detector="detector name",
    n="sample size",
    alpha="significance level",
    value="critical value, or the list of per-block values for the blocked scan",
    cached="True if the value was read from the calibration cache",
)
declare_event(
    "PowerCellComplete",
    detector="detector name",
    grid_value="scale or norm of the grid point",
    power="fraction of rejections",
    stderr="binomial standard error of the power",
)
declare_event(
    "PilotStep",
    detector="detector whose power is matched",
    norm="signal norm tried",
    power="power at that norm",
    target="power aimed at",
)
declare_event(
    "BenchmarkPoint",
    n="sample size",
    condensed_time="seconds per condensed ALR evaluation",
    evaluations="number of interval statistics evaluated",
    alr_time="seconds per full ALR evaluation, or None when skipped",
)
