"""Lowest-degree multiples of (x+1)^n with every coefficient in {-1, 0, 1}."""

from __future__ import annotations

import logging
import math

from pydantic import BaseModel, ConfigDict, Field

from factor_bounds.exceptions import DomainError, MultipleNotFoundError
from factor_bounds.polycore import IntPoly, exact_divide, negate_x

logger = logging.getLogger(__name__)


class HeightOneMultiple(BaseModel):
    """A height-1 multiple of (x+1)^n and its cofactor."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(..., ge=1)
    multiple: IntPoly = Field(..., description="Coefficients in {-1, 0, 1}, positive lead")
    cofactor: IntPoly = Field(..., description="multiple / (x+1)^n")
    exhausted_below: int = Field(
        ..., description="Every degree below this one was searched without success"
    )

    @property
    def degree(self) -> int:
        return len(self.multiple) - 1


class _MomentWalk:
    """Coefficients b_D = 1, b_{D-1}, ..., b_0 of q with (x-1)^n | q.

    M_k = sum C(i, k) b_i is the k-th Taylor coefficient of q at 1, and
    (x-1)^n | q exactly when M_0 = ... = M_{n-1} = 0. Once the indices
    >= i are fixed, the rest can still move M_k by at most
    sum_{j<i} C(j, k) = C(i, k+1).
    """

    def __init__(self, n: int, degree: int):
        self.n = n
        self.degree = degree
        self.binom = [[math.comb(j, k) for k in range(n + 1)] for j in range(degree + 1)]
        self.b = [0] * (degree + 1)
        self.nodes = 0

    def run(self) -> list[int] | None:
        self.b[self.degree] = 1
        moments = [self.binom[self.degree][k] for k in range(self.n)]
        if any(abs(m) > self.binom[self.degree][k + 1] for k, m in enumerate(moments)):
            return None
        return list(self.b) if self._assign(self.degree, moments) else None

    def _assign(self, i: int, moments: list[int]) -> bool:
        self.nodes += 1
        if i == 0:
            return not any(moments)
        j = i - 1
        row = self.binom[j]
        for v in (1, -1) if j == 0 else (1, 0, -1):
            if all(abs(m + v * row[k]) <= row[k + 1] for k, m in enumerate(moments)):
                self.b[j] = v
                if self._assign(j, [m + v * row[k] for k, m in enumerate(moments)]):
                    return True
        self.b[j] = 0
        return False


def height1_multiple_search(n: int, max_degree: int) -> HeightOneMultiple:
    """Lowest-degree p with coefficients in {-1, 0, 1} divisible by (x+1)^n.

    Degrees are tried in increasing order, each one exhaustively, so the
    witness returned has minimal degree.

    Raises:
        DomainError: If n < 1 or max_degree < n.
        MultipleNotFoundError: If no witness of degree <= max_degree exists.
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if max_degree < n:
        raise DomainError(f"max_degree {max_degree} is below the multiplicity {n}")
    base = IntPoly((1, 1)) ** n
    for degree in range(n, max_degree + 1):
        walk = _MomentWalk(n, degree)
        found = walk.run()
        logger.debug("degree %d: %d nodes", degree, walk.nodes)
        if found is None:
            continue
        # q has (x-1)^n as a factor, so q(-x) has (x+1)^n
        p = negate_x(IntPoly(found))
        if p.lc < 0:
            p = -p
        logger.info("height-1 multiple of (x+1)^%d found at degree %d", n, degree)
        return HeightOneMultiple(
            n=n, multiple=p, cofactor=exact_divide(p, base), exhausted_below=degree
        )
    raise MultipleNotFoundError(
        f"no polynomial of degree <= {max_degree} with coefficients in {{-1, 0, 1}} "
        f"is divisible by (x+1)^{n}"
    )
