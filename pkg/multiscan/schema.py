#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

"""Data schema classes"""

import numbers

_MISSING = object()


class ConfigError(ValueError):
    pass


class Schema:
    def __init__(self, name, title=None, desc=None, required=False, default=None):
        self.name = name
        self.title = title or name
        self.desc = desc
        self.required = required
        self.default = default

    def validate(self, value, path=None):
        """Return the normalized value, or raise ConfigError"""
        path = path or self.name
        if value is None:
            if self.required:
                raise ConfigError("%s: missing required value" % path)
            return self.default
        return self._check(value, path)

    def _check(self, value, path):
        return value


class StringSchema(Schema):
    def __init__(self, name, title=None, desc=None, required=False, default=""):
        super().__init__(name, title, desc, required, default)

    def _check(self, value, path):
        if not isinstance(value, str):
            raise ConfigError("%s: expected a string, got %r" % (path, value))
        return value


class IntegerSchema(Schema):
    def __init__(
        self, name, title=None, desc=None, required=False, default=0, minimum=None
    ):
        super().__init__(name, title, desc, required, default)
        self.minimum = minimum

    def _check(self, value, path):
        if isinstance(value, bool) or not isinstance(value, numbers.Integral):
            raise ConfigError("%s: expected an integer, got %r" % (path, value))
        if self.minimum is not None and value < self.minimum:
            raise ConfigError("%s: must be at least %d" % (path, self.minimum))
        return int(value)


class FloatSchema(Schema):
    def __init__(
        self,
        name,
        title=None,
        desc=None,
        required=False,
        default=0.0,
        minimum=None,
        maximum=None,
    ):
        super().__init__(name, title, desc, required, default)
        self.minimum = minimum
        self.maximum = maximum

    def _check(self, value, path):
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            raise ConfigError("%s: expected a number, got %r" % (path, value))
        value = float(value)
        if self.minimum is not None and value < self.minimum:
            raise ConfigError("%s: must be at least %g" % (path, self.minimum))
        if self.maximum is not None and value > self.maximum:
            raise ConfigError("%s: must be at most %g" % (path, self.maximum))
        return value


class EnumSchema(Schema):
    def __init__(
        self,
        name,
        title=None,
        desc=None,
        required=False,
        enums=lambda: [],
        default=None,
    ):
        super().__init__(name, title, desc, required, default)
        self.enums = enums

    def _check(self, value, path):
        choices = list(self.enums())
        if value not in choices:
            raise ConfigError(
                "%s: %r is not one of %s" % (path, value, ", ".join(choices))
            )
        return value


class BooleanSchema(Schema):
    def __init__(self, name, title=None, desc=None, required=False, default=False):
        super().__init__(name, title, desc, required, default)

    def _check(self, value, path):
        if not isinstance(value, bool):
            raise ConfigError("%s: expected true or false, got %r" % (path, value))
        return value


class ListSchema(Schema):
    """Homogeneous list of items"""

    def __init__(
        self, name, title=None, desc=None, required=False, item=None, default=()
    ):
        super().__init__(name, title, desc, required, default)
        self.item = item

    def validate(self, value, path=None):
        path = path or self.name
        if value is None:
            if self.required:
                raise ConfigError("%s: missing required value" % path)
            return list(self.default)
        return self._check(value, path)

    def _check(self, value, path):
        if isinstance(value, (str, bytes)) or not hasattr(value, "__iter__"):
            raise ConfigError("%s: expected a list, got %r" % (path, value))
        return [
            self.item.validate(x, "%s[%d]" % (path, i)) if self.item else x
            for i, x in enumerate(value)
        ]


class ArraySchema(Schema):
    """A fixed array of items"""

    def __init__(self, name, title=None, desc=None, required=False, members=[]):
        super().__init__(name, title, desc, required)
        self.members = members

    def validate(self, value, path=None):
        path = path or self.name
        if value is None:
            value = {}
        return self._check(value, path)

    def _check(self, value, path):
        if not isinstance(value, dict):
            raise ConfigError("%s: expected a mapping, got %r" % (path, value))
        known = {m.name for m in self.members}
        unknown = sorted(set(value) - known)
        if unknown:
            raise ConfigError("%s: unknown keys %s" % (path, ", ".join(unknown)))
        return {
            m.name: m.validate(value.get(m.name), path + "." + m.name)
            for m in self.members
        }
