"""Prime-field scalar arithmetic and prime-order cyclic groups.

Scalars are plain Python ints kept in canonical reduced form by the
:class:`ScalarField` that produced them. Group elements are opaque values
manipulated through a group object; two instantiations are provided:

* :class:`CurveGroup` -- secp256k1, a standard prime-order curve
  (cofactor 1, ~128-bit security), for production use.
* :class:`ToyGroup` -- the integers mod q under addition with generator 1.
  Discrete logs are directly readable (``mul(s, P) == s``), which lets
  tests check protocol math against plain integer arithmetic. Never use
  it outside tests.

Encodings are fixed-width big-endian byte strings: ``ceil(bits(q)/8)``
bytes for scalars, group-defined widths for points.
"""

from __future__ import annotations

from typing import Union

__all__ = [
    "ZeroInverse",
    "DecodeError",
    "ScalarField",
    "ToyGroup",
    "CurveGroup",
    "make_group",
    "Point",
    "TOY_EXAMPLE_ORDER",
    "TOY_SUITE_ORDER",
]

# Affine curve points are (x, y) tuples, the toy group uses bare ints,
# and None is the identity of the curve group.
Point = Union[int, tuple, None]

# Small prime for hand-checkable examples, Mersenne prime 2^61-1 for
# randomized suites (collision probability 1/q is negligible).
TOY_EXAMPLE_ORDER = 101
TOY_SUITE_ORDER = (1 << 61) - 1


class ZeroInverse(ArithmeticError):
    """Multiplicative inverse of zero was requested."""


class DecodeError(ValueError):
    """Byte string is not a valid encoding of a scalar or group element."""


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic below 3.3e24 and a
    strong probable-prime test beyond."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class ScalarField:
    """Arithmetic modulo a prime group order q.

    All methods return canonical values in [0, q); equality of scalars is
    plain integer (and therefore byte) equality.
    """

    def __init__(self, order: int):
        if order < 2 or not _is_prime(order):
            raise ValueError(f"group order must be prime, got {order}")
        self.order = order
        self.width = (order.bit_length() + 7) // 8

    def __repr__(self):
        return f"ScalarField({self.order})"

    def __eq__(self, other):
        return isinstance(other, ScalarField) and other.order == self.order

    def __hash__(self):
        return hash(("ScalarField", self.order))

    def reduce(self, value: int) -> int:
        return value % self.order

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.order

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.order

    def neg(self, a: int) -> int:
        return -a % self.order

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.order

    def inv(self, a: int) -> int:
        if a % self.order == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        return pow(a, -1, self.order)

    def rand(self, rng) -> int:
        """Uniform scalar from an rng exposing randrange (e.g. random.Random)."""
        return rng.randrange(self.order)

    def rand_nonzero(self, rng) -> int:
        while True:
            v = rng.randrange(self.order)
            if v != 0:
                return v

    def encode(self, a: int) -> bytes:
        return (a % self.order).to_bytes(self.width, "big")

    def decode(self, data: bytes) -> int:
        if len(data) != self.width:
            raise DecodeError(f"scalar encoding must be {self.width} bytes, got {len(data)}")
        v = int.from_bytes(data, "big")
        if v >= self.order:
            raise DecodeError(f"scalar {v} out of range for order {self.order}")
        return v


class ToyGroup:
    """Additive group of integers mod q with generator 1 (test oracle only).

    ``mul(s, generator)`` is the identity map on scalars, so every
    higher-level result can be checked by direct integer arithmetic.
    """

    kind = "toy"

    def __init__(self, order: int = TOY_SUITE_ORDER):
        self.field = ScalarField(order)
        self.order = order
        self.generator = 1
        self.identity = 0
        self.point_width = self.field.width

    def __repr__(self):
        return f"ToyGroup({self.order})"

    def contains(self, g: Point) -> bool:
        return isinstance(g, int) and 0 <= g < self.order

    def add(self, g: int, h: int) -> int:
        return (g + h) % self.order

    def neg(self, g: int) -> int:
        return -g % self.order

    def mul(self, s: int, g: int) -> int:
        return s * g % self.order

    def encode(self, g: int) -> bytes:
        return (g % self.order).to_bytes(self.point_width, "big")

    def decode(self, data: bytes) -> int:
        if len(data) != self.point_width:
            raise DecodeError(f"point encoding must be {self.point_width} bytes, got {len(data)}")
        v = int.from_bytes(data, "big")
        if v >= self.order:
            raise DecodeError(f"point {v} out of range for order {self.order}")
        return v


# secp256k1: y^2 = x^3 + 7 over F_p, prime group order (cofactor 1).
_SECP_P = 2**256 - 2**32 - 977
_SECP_B = 7
_SECP_N = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
_SECP_GX = 0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798
_SECP_GY = 0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8


class CurveGroup:
    """secp256k1 point arithmetic (affine tuples, None = point at infinity).

    Not constant time; side-channel hardening is out of scope for the
    simulation use case.
    """

    kind = "production-curve"

    def __init__(self):
        self.field = ScalarField(_SECP_N)
        self.order = _SECP_N
        self.generator = (_SECP_GX, _SECP_GY)
        self.identity = None
        self.point_width = 65  # 0x04 || x(32) || y(32); identity is 65 zero bytes

    def __repr__(self):
        return "CurveGroup(secp256k1)"

    def contains(self, g: Point) -> bool:
        if g is None:
            return True
        if not (isinstance(g, tuple) and len(g) == 2):
            return False
        x, y = g
        if not (0 <= x < _SECP_P and 0 <= y < _SECP_P):
            return False
        return (y * y - (x * x * x + _SECP_B)) % _SECP_P == 0

    def add(self, g: Point, h: Point) -> Point:
        if g is None:
            return h
        if h is None:
            return g
        x1, y1 = g
        x2, y2 = h
        if x1 == x2:
            if (y1 + y2) % _SECP_P == 0:
                return None
            # doubling: slope = 3x^2 / 2y
            lam = 3 * x1 * x1 * pow(2 * y1, -1, _SECP_P) % _SECP_P
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, _SECP_P) % _SECP_P
        x3 = (lam * lam - x1 - x2) % _SECP_P
        y3 = (lam * (x1 - x3) - y1) % _SECP_P
        return (x3, y3)

    def neg(self, g: Point) -> Point:
        if g is None:
            return None
        x, y = g
        return (x, -y % _SECP_P)

    def mul(self, s: int, g: Point) -> Point:
        """Double-and-add in Jacobian coordinates (one final inversion)."""
        s %= self.order
        if s == 0 or g is None:
            return None
        # Jacobian (X, Y, Z) represents affine (X/Z^2, Y/Z^3).
        rx, ry, rz = 0, 1, 0  # identity
        px, py, pz = g[0], g[1], 1
        while s:
            if s & 1:
                rx, ry, rz = _jac_add(rx, ry, rz, px, py, pz)
            px, py, pz = _jac_double(px, py, pz)
            s >>= 1
        if rz == 0:
            return None
        zinv = pow(rz, -1, _SECP_P)
        z2 = zinv * zinv % _SECP_P
        return (rx * z2 % _SECP_P, ry * z2 * zinv % _SECP_P)

    def encode(self, g: Point) -> bytes:
        if g is None:
            return bytes(self.point_width)
        x, y = g
        return b"\x04" + x.to_bytes(32, "big") + y.to_bytes(32, "big")

    def decode(self, data: bytes) -> Point:
        if len(data) != self.point_width:
            raise DecodeError(f"point encoding must be {self.point_width} bytes, got {len(data)}")
        if data == bytes(self.point_width):
            return None
        if data[0] != 0x04:
            raise DecodeError(f"bad point tag {data[0]:#x}")
        g = (int.from_bytes(data[1:33], "big"), int.from_bytes(data[33:], "big"))
        if not self.contains(g):
            raise DecodeError("point not on curve")
        return g


def _jac_double(x, y, z):
    if z == 0 or y == 0:
        return 0, 1, 0
    s = 4 * x * y * y % _SECP_P
    m = 3 * x * x % _SECP_P  # curve a = 0
    nx = (m * m - 2 * s) % _SECP_P
    ny = (m * (s - nx) - 8 * y * y * y * y) % _SECP_P
    nz = 2 * y * z % _SECP_P
    return nx, ny, nz


def _jac_add(x1, y1, z1, x2, y2, z2):
    if z1 == 0:
        return x2, y2, z2
    if z2 == 0:
        return x1, y1, z1
    z1s, z2s = z1 * z1 % _SECP_P, z2 * z2 % _SECP_P
    u1, u2 = x1 * z2s % _SECP_P, x2 * z1s % _SECP_P
    s1, s2 = y1 * z2s * z2 % _SECP_P, y2 * z1s * z1 % _SECP_P
    if u1 == u2:
        if s1 != s2:
            return 0, 1, 0
        return _jac_double(x1, y1, z1)
    h = (u2 - u1) % _SECP_P
    r = (s2 - s1) % _SECP_P
    h2 = h * h % _SECP_P
    h3 = h2 * h % _SECP_P
    u1h2 = u1 * h2 % _SECP_P
    nx = (r * r - h3 - 2 * u1h2) % _SECP_P
    ny = (r * (u1h2 - nx) - s1 * h3) % _SECP_P
    nz = h * z1 * z2 % _SECP_P
    return nx, ny, nz


def make_group(kind: str, order: int | None = None):
    """Build a group by kind: "production" (secp256k1) or "toy" (Z_q, +).

    ``order`` applies to the toy kind only and defaults to the 61-bit
    Mersenne prime used by the randomized test suites.
    """
    if kind in ("production", "production-curve"):
        if order is not None:
            raise ValueError("production curve has a fixed order")
        return CurveGroup()
    if kind == "toy":
        return ToyGroup(TOY_SUITE_ORDER if order is None else order)
    raise ValueError(f"unknown group kind {kind!r}")
