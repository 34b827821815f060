"""Coefficient fields A, B, C, E of the quasilinear equation.

A field packages four analytic expressions in the state variables
(x, y, z, p, q) together with a closed domain box.  Every evaluation
checks box membership and the ellipticity discriminant D = A*C - B^2 + E,
so nothing downstream ever consumes a state where the equation fails to
be elliptic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import EllipticityError, FieldEvalError, OutOfBoxError, ValidationError
from .expr import Expr, Num, VARIABLES, evaluate, parse_expr, to_string, variables_of

__all__ = [
    "CoefficientField",
    "DEFAULT_BOX",
    "builtin_field",
    "builtin_field_names",
    "box_violation",
    "eval_field",
    "pure_field",
]

#: Default domain box: generous in the gradient, tight around the origin
#: in (x, y, z) where the singular solutions live.
DEFAULT_BOX = {
    "x": (-1.0, 1.0),
    "y": (-1.0, 1.0),
    "z": (-1.0, 1.0),
    "p": (-4.0, 4.0),
    "q": (-4.0, 4.0),
}

_ZERO = Num(0.0)


def _is_zero_constant(e: Expr) -> bool:
    return not variables_of(e) and float(evaluate(e, dict.fromkeys(VARIABLES, 0.0))) == 0.0


def _validate_box(box) -> dict[str, tuple[float, float]]:
    if set(box) != set(VARIABLES):
        raise ValidationError(
            f"box must bound exactly {', '.join(VARIABLES)}; got {sorted(box)}")
    out = {}
    for name in VARIABLES:
        bounds = box[name]
        if len(bounds) != 2:
            raise ValidationError(f"box[{name!r}] must be a [lo, hi] pair")
        lo, hi = float(bounds[0]), float(bounds[1])
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise ValidationError(f"box[{name!r}] = [{lo}, {hi}] is not a valid range")
        out[name] = (lo, hi)
    return out


def _as_expr(value) -> Expr:
    return value if isinstance(value, Expr) else parse_expr(str(value))


@dataclass(frozen=True, eq=False)
class CoefficientField:
    """Immutable field (A, B, C, E) with its domain box."""

    A: Expr
    B: Expr
    C: Expr
    E: Expr
    box: dict

    def __post_init__(self):
        object.__setattr__(self, "box", _validate_box(self.box))

    @property
    def pure(self) -> bool:
        """True when A, B, C vanish identically (det D^2 z = E form)."""
        return all(_is_zero_constant(e) for e in (self.A, self.B, self.C))

    def to_dict(self) -> dict:
        return {
            "A": to_string(self.A),
            "B": to_string(self.B),
            "C": to_string(self.C),
            "E": to_string(self.E),
            "box": {name: list(self.box[name]) for name in VARIABLES},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CoefficientField":
        try:
            exprs = {name: _as_expr(data[name]) for name in ("A", "B", "C", "E")}
            box = data["box"]
        except KeyError as missing:
            raise ValidationError(f"field literal is missing key {missing}") from None
        return cls(exprs["A"], exprs["B"], exprs["C"], exprs["E"], box)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CoefficientField":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise ValidationError(f"field literal is not valid JSON: {err}") from None
        return cls.from_dict(data)


def pure_field(phi, box=None) -> CoefficientField:
    """det D^2 z = phi(x,y,z,p,q): A = B = C = 0, E = phi."""
    return CoefficientField(_ZERO, _ZERO, _ZERO, _as_expr(phi),
                            DEFAULT_BOX if box is None else box)


def box_violation(field: CoefficientField, state):
    """First (variable, flat_index, value) outside the box, or None.

    ``state`` is the (x, y, z, p, q) component sequence; components may be
    scalars or arrays.  For scalar states the index is None.
    """
    for name, values in zip(VARIABLES, state):
        lo, hi = field.box[name]
        arr = np.asarray(values, dtype=float)
        bad = ~((arr >= lo) & (arr <= hi))  # catches NaN too
        if np.any(bad):
            if arr.ndim == 0:
                return name, None, float(arr)
            idx = int(np.argmax(bad.ravel()))
            return name, idx, float(arr.ravel()[idx])
    return None


def eval_field(field: CoefficientField, state):
    """Evaluate (A, B, C, E, D) at a state, with D = A*C - B^2 + E.

    Args:
        field: the coefficient field.
        state: sequence of five scalars or arrays (x, y, z, p, q).

    Returns:
        Five arrays (or scalars) broadcast to the common state shape.

    Raises:
        OutOfBoxError: a component leaves the domain box.
        FieldEvalError: a coefficient evaluates to NaN/inf inside the box.
        EllipticityError: D <= 0 at some state.
    """
    violation = box_violation(field, state)
    if violation is not None:
        name, idx, value = violation
        lo, hi = field.box[name]
        where = "" if idx is None else f" at index {idx}"
        raise OutOfBoxError(
            f"{name}={value!r} outside [{lo}, {hi}]{where}",
            variable=name, index=idx)

    env = dict(zip(VARIABLES, (np.asarray(v, dtype=float) for v in state)))
    shape = np.broadcast_shapes(*(env[name].shape for name in VARIABLES))
    values = []
    with np.errstate(all="ignore"):
        for label in ("A", "B", "C", "E"):
            raw = evaluate(getattr(field, label), env)
            arr = np.broadcast_to(np.asarray(raw, dtype=float), shape)
            if not np.all(np.isfinite(arr)):
                idx = int(np.argmax(~np.isfinite(arr).ravel())) if shape else None
                where = "" if idx is None else f" at index {idx}"
                raise FieldEvalError(f"coefficient {label} is non-finite{where}")
            values.append(arr)
    a, b, c, e = values
    disc = a * c - b * b + e
    if not np.all(disc > 0):
        flat = np.atleast_1d(~(disc > 0)).ravel()
        idx = int(np.argmax(flat)) if shape else None
        worst = float(np.min(disc))
        raise EllipticityError(
            f"ellipticity D = A*C - B^2 + E not positive (min {worst!r})",
            index=idx)
    if not shape:
        return tuple(float(v) for v in (a, b, c, e, disc))
    return a, b, c, e, disc


_BUILTIN_FIELDS = {
    "pure-one": {"A": "0", "B": "0", "C": "0", "E": "1"},
    # 2 u_x^2 u_xy + u_xx u_yy - u_xy^2 = 1 + u_x^4 in the A..E form;
    # D = -p^4 + (1 + p^4) = 1 identically.
    "remark42": {"A": "0", "B": "p^2", "C": "0", "E": "1 + p^4"},
}


def builtin_field(name: str) -> CoefficientField:
    """Look up a gallery field by name."""
    try:
        exprs = _BUILTIN_FIELDS[name]
    except KeyError:
        known = ", ".join(sorted(_BUILTIN_FIELDS))
        raise ValidationError(f"unknown field {name!r}; known: {known}") from None
    return CoefficientField(parse_expr(exprs["A"]), parse_expr(exprs["B"]),
                            parse_expr(exprs["C"]), parse_expr(exprs["E"]),
                            DEFAULT_BOX)


def builtin_field_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTIN_FIELDS))
