#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

from multiscan.event import (
    declare_event,
    emit_event,
    get_events_info,
    register_handler,
    unregister_handler,
)
from multiscan.mod import (
    DETECTOR_NAMES,
    DetectorModule,
    get_module,
    get_modules,
    load_modules,
    needed_reductions,
    resolve,
)
from multiscan.signal_model import DomainError

from .multiscantest import MultiscanTestCase, main


class UnnamedDetector(DetectorModule):
    pass


class ModuleRegistryTest(MultiscanTestCase):
    def test_load(self):
        mods = load_modules()
        self.assertEqual(sorted(mods), sorted(DETECTOR_NAMES))
        self.assertNotIn(None, mods)

    def test_get(self):
        self.assertEqual(get_module("scan").name, "scan")
        self.assertTrue(get_module("blocked_scan").blocked)
        self.assertEqual([m.name for m in get_modules()], list(DETECTOR_NAMES))
        with self.assertRaises(DomainError):
            get_module("nope")

    def test_resolve(self):
        m = UnnamedDetector()
        self.assertIs(resolve(m), m)
        self.assertIs(resolve("alr"), get_module("alr"))

    def test_reductions(self):
        needs = needed_reductions(get_modules(["scan", "alr"]))
        self.assertEqual(needs, {"max_abs", "log_sum"})
        self.assertEqual(needed_reductions(get_modules(["condensed_alr"])), set())


class EventTest(MultiscanTestCase):
    def setUp(self):
        self.seen = []

    def record(self, event, **params):
        self.seen.append((event, params))

    def fail(self, event, **params):
        raise RuntimeError("handler failure")

    def test_emit(self):
        self.assertIn("PowerCellComplete", get_events_info())
        register_handler("PowerCellComplete", self.record)
        register_handler("PowerCellComplete", self.record)
        try:
            emit_event("PowerCellComplete", detector="scan", power=0.5)
        finally:
            unregister_handler("PowerCellComplete", self.record)
        expected = ("PowerCellComplete", {"detector": "scan", "power": 0.5})
        self.assertEqual(self.seen, [expected])
        emit_event("PowerCellComplete", detector="scan")
        self.assertEqual(len(self.seen), 1)

    def test_failing_handler(self):
        if "TestFailingHandler" not in get_events_info():
            declare_event("TestFailingHandler", value="anything")
        register_handler(None, self.fail)
        register_handler("TestFailingHandler", self.record)
        try:
            with self.assertLogs("multiscan.event", "ERROR"):
                emit_event("TestFailingHandler", value=1)
        finally:
            unregister_handler(None, self.fail)
            unregister_handler("TestFailingHandler", self.record)
        self.assertEqual(self.seen, [("TestFailingHandler", {"value": 1})])

    def test_undeclared(self):
        with self.assertRaises(KeyError):
            emit_event("NoSuchEvent")
        with self.assertRaises(ValueError):
            emit_event("PowerCellComplete", detector="scan", typo=1)
        with self.assertRaises(ValueError):
            declare_event("PowerCellComplete", detector="again")


if __name__ == "__main__":
    main()
