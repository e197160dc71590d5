#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

from multiscan import schema

from .multiscantest import MultiscanTestCase, main


class SchemaTest(MultiscanTestCase):
    def setUp(self):
        self.schema = schema.ArraySchema(
            "cfg",
            members=[
                schema.StringSchema("name", required=True),
                schema.IntegerSchema("count", default=3, minimum=1),
                schema.FloatSchema("rate", default=0.5, minimum=0, maximum=1),
                schema.EnumSchema(
                    "color", enums=lambda: ["red", "blue"], default="red"
                ),
                schema.BooleanSchema("flag"),
                schema.ListSchema(
                    "items", item=schema.IntegerSchema("item"), default=(1,)
                ),
            ],
        )

    def test_defaults(self):
        self.assertEqual(
            self.schema.validate({"name": "x"}),
            {
                "name": "x",
                "count": 3,
                "rate": 0.5,
                "color": "red",
                "flag": False,
                "items": [1],
            },
        )

    def test_normalize(self):
        out = self.schema.validate({"name": "x", "rate": 1, "items": (4, 5)})
        self.assertIsInstance(out["rate"], float)
        self.assertEqual(out["items"], [4, 5])

    def test_errors(self):
        cases = [
            ({}, "cfg.name: missing required value"),
            ({"name": 1}, "cfg.name: expected a string, got 1"),
            ({"name": "x", "count": 0}, "cfg.count: must be at least 1"),
            ({"name": "x", "count": True}, "cfg.count: expected an integer, got True"),
            ({"name": "x", "rate": 2}, "cfg.rate: must be at most 1"),
            (
                {"name": "x", "color": "green"},
                "cfg.color: 'green' is not one of red, blue",
            ),
            ({"name": "x", "flag": 1}, "cfg.flag: expected true or false, got 1"),
            (
                {"name": "x", "items": [1, "2"]},
                "cfg.items[1]: expected an integer, got '2'",
            ),
            ({"name": "x", "extra": 1, "more": 2}, "cfg: unknown keys extra, more"),
        ]
        for value, message in cases:
            with self.assertRaises(schema.ConfigError) as cm:
                self.schema.validate(value)
            self.assertEqual(str(cm.exception), message)

    def test_not_a_mapping(self):
        with self.assertRaises(schema.ConfigError):
            self.schema.validate([1, 2])


if __name__ == "__main__":
    main()
