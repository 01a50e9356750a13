"""wprelay utility functions."""

from __future__ import annotations

SIGNIFICANT_DIGITS = 9


def format_sig(value: float | None, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Format a real number with a fixed count of significant digits.

    Parameters
    ----------
    value : float or None
        Number to format. ``None`` renders as an empty string so optional
        CSV cells stay blank.
    digits : int
        Significant digits kept.

    Returns
    -------
    str
        The formatted number, e.g. ``format_sig(1/3) == '0.333333333'``.
    """
    if value is None:
        return ''
    return f'{float(value):.{digits}g}'


def relative_deviation(value: float, reference: float) -> float:
    """Return ``|value - reference| / |reference|``.

    A zero reference falls back to the absolute deviation.
    """
    scale = abs(reference)
    if scale == 0.0:
        return abs(value - reference)
    return abs(value - reference) / scale

