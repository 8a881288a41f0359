"""
    Author: julij.jegorov
    Date: 12/10/2026
    Description: Validation helpers for scenario documents and command flags:
                 _is_missing, _check_required, _check_number, _check_vector, _check_keys.
                 Each helper returns an error message or None so checks chain with `or`.
"""

import math
import numpy as np

_ERROR_PREFIX = 'futurecone error: '


def _is_missing(val):
    """Check if a value is missing, empty, or invalid.

    Handles None, NaN, empty strings and empty sequences.
    """
    if val is None:
        return True
    if isinstance(val, float) and np.isnan(val):
        return True
    if isinstance(val, str) and (not val.strip() or val.strip().lower() == 'nan'):
        return True
    if isinstance(val, (list, tuple, dict)) and len(val) == 0:
        return True
    return False


def _check_required(name, val, allow_none=False):
    """Validate that a required field has a value.

    Returns an error message if missing, otherwise None.
    """
    if allow_none and val is None:
        return None
    if _is_missing(val):
        return _ERROR_PREFIX + '%s is required and cannot be empty.' % name
    return None


def _check_number(name, val, minimum=None, strict=False, integer=False, allow_none=False):
    """Validate a finite real (or integer) value with an optional lower bound.

    `strict` makes the bound exclusive. Booleans are rejected even though they are ints.
    """
    if allow_none and val is None:
        return None
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        return _ERROR_PREFIX + '%s must be a number.' % name
    if integer and not isinstance(val, int):
        return _ERROR_PREFIX + '%s must be an integer.' % name
    if not math.isfinite(val):
        return _ERROR_PREFIX + '%s must be finite.' % name
    if minimum is not None:
        if strict and val <= minimum:
            return _ERROR_PREFIX + '%s must be > %s.' % (name, minimum)
        if not strict and val < minimum:
            return _ERROR_PREFIX + '%s must be >= %s.' % (name, minimum)
    return None


def _check_vector(name, val, dimension, allow_none=False):
    """Validate a list of `dimension` finite numbers."""
    if allow_none and val is None:
        return None
    if not isinstance(val, (list, tuple)):
        return _ERROR_PREFIX + '%s must be a list of %d numbers.' % (name, dimension)
    if len(val) != dimension:
        return _ERROR_PREFIX + '%s must have %d components, got %d.' % (name, dimension, len(val))
    for idx, component in enumerate(val):
        err = _check_number('%s[%d]' % (name, idx), component)
        if err:
            return err
    return None


def _check_keys(name, mapping, required=(), optional=()):
    """Validate a JSON object: must be a dict, have all required keys and no unknown keys."""
    if not isinstance(mapping, dict):
        return _ERROR_PREFIX + '%s must be an object.' % name
    for key in required:
        if key not in mapping:
            return _ERROR_PREFIX + '%s.%s is required.' % (name, key)
    allowed = set(required) | set(optional)
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        return _ERROR_PREFIX + '%s has unknown key(s): %s.' % (name, ', '.join(unknown))
    return None


def _check_choice(name, val, choices):
    if val not in choices:
        return _ERROR_PREFIX + '%s must be one of %s, got %r.' % (name, '|'.join(choices), val)
    return None
