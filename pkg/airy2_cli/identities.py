"""
Identities expressing u_{j,k} F_2 through F_2' = f_2 and its derivatives,
and the closed forms of the lowest u_{j,k} in q, q' and s
"""

from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np
import sympy

from .errors import UnknownIdentityError

IdentityId = Union[str, Tuple[int, int]]

# row (j, k): coefficients of f_2, f_2', ..., f_2^(m) in u_{j,k} F_2
U_TABLE: Dict[Tuple[int, int], List[str]] = {
    (0, 0): ["1"],
    (1, 0): ["0", "1/2"],
    (1, 1): ["-s/3", "0", "1/3"],
    (2, 0): ["s/3", "0", "1/6"],
    (2, 1): ["-1/4", "0", "0", "1/8"],
    (3, 0): ["7/12", "s/3", "0", "1/24"],
    (2, 2): ["s**2/5", "-3/10", "0", "0", "1/20"],
    (3, 1): ["-s**2/5", "2/15", "s/6", "0", "1/30"],
    (4, 0): ["s**2/5", "47/60", "s/6", "0", "1/120"],
    (3, 2): ["2*s/9", "s**2/18", "-1/12", "s/18", "0", "1/72"],
    (4, 1): ["-13*s/18", "-s**2/18", "11/24", "s/9", "0", "1/144"],
    (5, 0): ["101*s/90", "23*s**2/90", "59/120", "s/18", "0", "1/720"],
    (3, 3): [
        "-s**3/7 + 34/63", "17*s/42", "s**2/9", "-1/18", "s/36", "0",
        "1/252",
    ],
    (4, 2): [
        "s**3/7 - 11/42", "-13*s/84", "0", "1/8", "s/24", "0", "1/336",
    ],
    (5, 1): [
        "-s**3/7 - 74/105", "-47*s/420", "s**2/10", "7/20", "s/24", "0",
        "1/840",
    ],
    (6, 0): [
        "s**3/7 + 1151/630", "733*s/420", "7*s**2/45", "71/360", "s/72",
        "0", "1/5040",
    ],
    (4, 3): [
        "-s**2/4", "127/288", "5*s/18", "s**2/18", "5/288", "s/72", "0",
        "1/1152",
    ],
    (5, 2): [
        "43*s**2/60", "s**3/15 - 123/160", "-3*s/20", "s**2/30",
        "61/480", "s/60", "0", "1/1920",
    ],
    (6, 1): [
        "-73*s**2/60", "-s**3/15 + 271/1440", "29*s/36", "17*s**2/180",
        "221/1440", "s/90", "0", "1/5760",
    ],
    (7, 0): [
        "691*s**2/420", "22*s**3/105 + 4873/1440", "394*s/315",
        "11*s**2/180", "83/1440", "s/360", "0", "1/40320",
    ],
    (4, 4): [
        "s**4/9 - 118*s/81", "-17*s**2/54", "-s**3/81 + 119/144",
        "31*s/108", "s**2/27", "1/144", "s/216", "0", "1/5184",
    ],
    (5, 3): [
        "-s**4/9 + 667*s/810", "197*s**2/540", "32*s**3/405 - 4/45",
        "119*s/1080", "29*s**2/1080", "11/360", "11*s/2160", "0",
        "1/6480",
    ],
    (6, 2): [
        "s**4/9 + 322*s/405", "103*s**2/540", "s**3/162 - 35/72",
        "113*s/540", "37*s**2/1080", "11/180", "s/216", "0", "1/12960",
    ],
    (7, 1): [
        "-s**4/9 - 21167*s/5670", "-1999*s**2/3780",
        "37*s**3/567 + 115/63", "6107*s/7560", "47*s**2/1080", "17/360",
        "s/432", "0", "1/45360",
    ],
    (8, 0): [
        "s**4/9 + 19912*s/2835", "5297*s**2/1890",
        "409*s**3/2835 + 28319/10080", "4273*s/7560", "19*s**2/1080",
        "19/1440", "s/2160", "0", "1/362880",
    ],
}

UAccessor = Callable[[int, int], np.ndarray]
Combination = Tuple[Callable[[UAccessor], np.ndarray], List[str]]


def _a(u: UAccessor) -> np.ndarray:
    return u(1, 0) ** 2 - u(0, 0) * u(1, 1)


def _b(u: UAccessor) -> np.ndarray:
    return (
        -2.0 * u(2, 0) ** 2
        + u(1, 1) * u(2, 0)
        - u(1, 0) * u(2, 1)
        + 2.0 * u(0, 0) * u(2, 2)
        + 3.0 * u(1, 0) * u(3, 0)
        - 3.0 * u(0, 0) * u(3, 1)
    )


def _c(u: UAccessor) -> np.ndarray:
    return u(1, 0) * u(2, 0) - u(0, 0) * u(2, 1)


# quadratic combinations of u_{j,k} that also reduce to f_2 derivatives
COMBINATIONS: Dict[str, Combination] = {
    "8th": (_a, ["-1/6", "s/3", "0", "-1/12"]),
    "A": (_a, ["-1/6", "s/3", "0", "-1/12"]),
    "B": (_b, ["-s/3", "2*s**2/3", "0", "-s/6"]),
    "C": (_c, ["0", "1/12", "s/6", "0", "-1/24"]),
}


def identity_ids() -> List[IdentityId]:
    """Every verifiable identity, table rows first"""
    ids: List[IdentityId] = list(U_TABLE)
    ids.extend(COMBINATIONS)
    return ids


def normalize_id(ident: IdentityId) -> IdentityId:
    """Map '2,1', (2, 1) or (1, 2) to the table key; keep named ids"""
    if isinstance(ident, str):
        name = ident.strip()
        if name in COMBINATIONS:
            return name
        parts = name.replace("(", "").replace(")", "").split(",")
        try:
            ident = tuple(int(p) for p in parts)  # type: ignore
        except ValueError:
            raise UnknownIdentityError(
                f"unknown identity '{name}'"
            ) from None
    if isinstance(ident, tuple) and len(ident) == 2:
        key = (max(ident), min(ident))
        if key in U_TABLE:
            return key
    raise UnknownIdentityError(f"unknown identity {ident!r}")


def format_id(ident: IdentityId) -> str:
    if isinstance(ident, tuple):
        return f"{ident[0]},{ident[1]}"
    return ident


@lru_cache(maxsize=None)
def _coefficient(expr: str) -> Callable[[np.ndarray], np.ndarray]:
    s = sympy.Symbol("s")
    parsed = sympy.sympify(expr)
    if parsed.is_number:
        value = float(parsed)
        return lambda x: np.full_like(x, value, dtype=float)
    return sympy.lambdify(s, parsed, "numpy")


def coefficient_weights(ident: IdentityId, s: np.ndarray) -> np.ndarray:
    """Weights of f_2^(m), m = 0.., on the right side, evaluated at s"""
    key = normalize_id(ident)
    coeffs: Sequence[str]
    if isinstance(key, tuple):
        coeffs = U_TABLE[key]
    else:
        coeffs = COMBINATIONS[key][1]
    s = np.asarray(s, dtype=float)
    return np.array([_coefficient(c)(s) for c in coeffs])


def left_side(ident: IdentityId, u: UAccessor) -> np.ndarray:
    """The u-combination multiplying F_2 on the left side"""
    key = normalize_id(ident)
    if isinstance(key, tuple):
        return u(*key)
    return COMBINATIONS[key][0](u)


def closed_form_u(
    j: int, k: int, s: np.ndarray, q: np.ndarray, qp: np.ndarray
) -> np.ndarray:
    """u_{j,k} as a polynomial in s, q and q' for (j, k) up to (2, 0)"""
    key = (max(j, k), min(j, k))
    u00 = qp**2 - s * q**2 - q**4
    if key == (0, 0):
        return u00
    if key == (1, 0):
        return 0.5 * u00**2 - 0.5 * q**2
    u11 = u00**3 / 3.0 - (q**2 + s / 3.0) * u00 - 2.0 / 3.0 * q * qp
    if key == (1, 1):
        return u11
    if key == (2, 0):
        return 0.5 * u11 + 0.5 * s * u00
    raise UnknownIdentityError(f"no closed form for u_{{{j},{k}}}")
