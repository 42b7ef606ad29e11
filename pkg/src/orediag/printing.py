"""Human-readable rendering of polynomials with user variable names."""

from gmpy2 import mpq


def _scalar(c, field):
    if getattr(field, "characteristic", 0):
        return str(c.v), False
    c = mpq(c)
    neg = c < 0
    c = -c if neg else c
    if c.denominator == 1:
        return str(c.numerator), neg
    return f"{c.numerator}/{c.denominator}", neg


def _monomial(alpha, b, names, op):
    parts = []
    for name, e in zip(names, alpha):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    if b:
        parts.append(op if b == 1 else f"{op}^{b}")
    return "*".join(parts)


def format_terms(items, names, op, field):
    """Render ``(_, alpha, c)`` or ``(b, alpha, c)`` items in the given order.

    The first element of each item is the operator power (``()`` or ``None``
    for plain base polynomials).
    """
    out = []
    for b, alpha, c in items:
        b = b if isinstance(b, int) else 0
        mono = _monomial(alpha, b, names, op)
        text, neg = _scalar(c, field)
        if mono and text == "1":
            body = mono
        elif mono:
            body = f"{text}*{mono}"
        else:
            body = text
        if out:
            out.append(("-" if neg else "+") + body)
        else:
            out.append(("-" if neg else "") + body)
    return "".join(out) if out else "0"
