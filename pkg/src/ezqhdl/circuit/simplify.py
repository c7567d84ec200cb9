"""
Local rewrite rules applied to a fixpoint:

  R1  P_s2 <| P_s1                     -> P_(s2 o s1)
  R2  1_n <| X, X <| 1_n               -> X
  R3  ... [+] 1_m [+] 1_n [+] ...      -> ... [+] 1_(m+n) [+] ...
  R4  (A <| B) <| C                    -> A <| (B <| C)
  R5  (A [+] B) <| (C [+] D)           -> (A <| C) [+] (B <| D)   if cdim(A) = cdim(C)
"""
import itertools
import logging
import typing

from ezqhdl import permutations
from ezqhdl.circuit.expression import CircuitExpression, ComponentRef, Series, Concatenation, Feedback, \
    Permutation, Identity, concat

logger = logging.getLogger(__name__)


def simplify(e: CircuitExpression) -> CircuitExpression:
    while True:
        simplified = _simplify_once(e)
        if simplified == e:
            return e
        e = simplified


def _simplify_once(e: CircuitExpression) -> CircuitExpression:
    if isinstance(e, (ComponentRef, Identity)):
        return e

    if isinstance(e, Permutation):
        return Identity(e.cdim) if permutations.is_identity(e.sigma) else e

    if isinstance(e, Feedback):
        return Feedback(_simplify_once(e.inner), e.k, e.l)

    if isinstance(e, Concatenation):
        return _merge_identities(concat([_simplify_once(o) for o in e.operands]))

    if isinstance(e, Series):
        factors = [_simplify_once(f) for f in _chain(e)]
        return _rebuild_chain(_reduce_chain(factors), e.cdim)

    raise TypeError(f"Unknown circuit expression node {type(e).__name__}")


def _chain(e: CircuitExpression) -> typing.List[CircuitExpression]:
    """
    Flattens nested series products into factors ordered downstream first.
    """
    if isinstance(e, Series):
        return _chain(e.left) + _chain(e.right)

    return [e]


def _rebuild_chain(factors: typing.List[CircuitExpression], cdim: int) -> CircuitExpression:
    if len(factors) == 0:
        return Identity(cdim)

    result = factors[-1]
    for f in reversed(factors[:-1]):
        result = Series(f, result)

    return result


def _reduce_chain(factors: typing.List[CircuitExpression]) -> typing.List[CircuitExpression]:
    factors = [f for f in factors if not isinstance(f, Identity)]

    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            combined = _combine(factors[i], factors[i + 1])
            if combined is not None:
                factors = factors[:i] + combined + factors[i + 2:]
                changed = True
                break

    return factors


def _combine(downstream: CircuitExpression, upstream: CircuitExpression) \
        -> typing.Optional[typing.List[CircuitExpression]]:
    """
    @return: replacement factors for the adjacent pair, or None if no rule applies
    """
    if isinstance(downstream, Permutation) and isinstance(upstream, Permutation):
        sigma = permutations.compose(downstream.sigma, upstream.sigma)
        logger.debug(f"R1: {downstream.to_text()} ◁ {upstream.to_text()}")
        return [] if permutations.is_identity(sigma) else [Permutation(sigma)]

    if isinstance(downstream, Concatenation) and isinstance(upstream, Concatenation):
        fused = _fuse_blocks(downstream, upstream)
        if fused is not None:
            logger.debug(f"R5: fused {downstream.to_text()} ◁ {upstream.to_text()}")
            return [fused]

    return None


def _split_identities(operands: typing.Sequence[CircuitExpression]) -> typing.List[CircuitExpression]:
    result = []
    for o in operands:
        if isinstance(o, Identity):
            result.extend(Identity(1) for _ in range(o.n))
        else:
            result.append(o)

    return result


def _fuse_blocks(downstream: Concatenation, upstream: Concatenation) -> typing.Optional[CircuitExpression]:
    xs = _split_identities(downstream.operands)
    ys = _split_identities(upstream.operands)

    x_bounds = set(itertools.accumulate(x.cdim for x in xs))
    y_bounds = set(itertools.accumulate(y.cdim for y in ys))
    common = sorted(x_bounds & y_bounds)

    if len(common) < 2:
        return None

    blocks = []
    x_groups = _group(xs, common)
    y_groups = _group(ys, common)
    for gx, gy in zip(x_groups, y_groups):
        blocks.append(Series(concat(gx), concat(gy)))

    return Concatenation(tuple(blocks))


def _group(operands: typing.List[CircuitExpression], bounds: typing.List[int]) \
        -> typing.List[typing.List[CircuitExpression]]:
    groups = [[] for _ in bounds]
    position = 0
    group = 0
    for o in operands:
        groups[group].append(o)
        position += o.cdim
        if position == bounds[group]:
            group += 1

    return groups


def _merge_identities(e: CircuitExpression) -> CircuitExpression:
    if not isinstance(e, Concatenation):
        return e

    operands: typing.List[CircuitExpression] = []
    for o in e.operands:
        if isinstance(o, Identity) and operands and isinstance(operands[-1], Identity):
            operands[-1] = Identity(operands[-1].n + o.n)
        else:
            operands.append(o)

    return concat(operands)
