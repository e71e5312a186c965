import math

import numpy as np


def calculate_fraction(part, whole):
    """Fraction part/whole, 0 for an empty whole"""
    if whole == 0:
        return 0.0
    return part / whole


def tail_start(length, fraction):
    """Index where the last ``fraction`` of a series of ``length`` begins"""
    fraction = min(max(fraction, 0.0), 1.0)
    return min(length - 1, int(math.floor(length * (1.0 - fraction)))) if length else 0


def format_float(value):
    """Shortest text that reads back to the same float ('' for None)"""
    if value is None:
        return ''
    return '%.17g' % value


def parse_float(text):
    """Inverse of format_float"""
    text = text.strip()
    if text == '':
        return None
    return float(text)


def parse_optional_int(text):
    """Integer or None for an empty field"""
    text = text.strip()
    return int(text) if text else None


def axis_values(minimum, maximum, count):
    """Evenly spaced grid including both ends"""
    return np.linspace(minimum, maximum, int(count))


def evenly_spaced(frequencies, tolerance=0.15):
    """
    Check that every gap between sorted peak frequencies is an integer
    multiple of the smallest gap

    Args:
        frequencies: peak positions
        tolerance: allowed deviation of gap/smallest_gap from an integer

    Returns:
        bool: False for fewer than two peaks
    """
    freqs = np.sort(np.asarray(frequencies, dtype=np.float64))
    if freqs.size < 2:
        return False
    gaps = np.diff(freqs)
    base = gaps.min()
    if base <= 0:
        return False
    ratios = gaps / base
    return bool(np.all(np.abs(ratios - np.round(ratios)) < tolerance))


def detect_boundary(values, labels, normal='NP'):
    """
    Locate the first departure from the normal label along a 1-D scan

    Args:
        values: scan coordinates in increasing order
        labels: label strings, one per coordinate
        normal: label treated as the inside of the region

    Returns:
        float: midpoint between the last normal point and the first other
        point, or None if the scan never leaves (or never starts in) the region
    """
    values = list(values)
    labels = [str(label) for label in labels]
    for index in range(1, len(values)):
        if labels[index - 1] == normal and labels[index] != normal:
            return 0.5 * (values[index - 1] + values[index])
    return None


def first_departure(values, labels, normal='NP'):
    """First scan coordinate whose label differs from ``normal``"""
    for value, label in zip(values, labels):
        if str(label) != normal:
            return value
    return None
