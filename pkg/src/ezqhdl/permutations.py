"""
Channel permutations stored by their 1-based image tuple: sigma[l - 1] is the output channel fed by input l.
"""
import typing

Permutation = typing.Tuple[int, ...]


def is_permutation(sigma: typing.Sequence[int]) -> bool:
    return len(sigma) > 0 and sorted(sigma) == list(range(1, len(sigma) + 1))


def identity_permutation(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def is_identity(sigma: typing.Sequence[int]) -> bool:
    return tuple(sigma) == identity_permutation(len(sigma))


def compose(sigma_2: typing.Sequence[int], sigma_1: typing.Sequence[int]) -> Permutation:
    """
    (sigma_2 o sigma_1)(l) = sigma_2(sigma_1(l))
    """
    if len(sigma_2) != len(sigma_1):
        raise ValueError(f"Cannot compose permutations of size {len(sigma_2)} and {len(sigma_1)}")

    return tuple(sigma_2[s - 1] for s in sigma_1)


def invert(sigma: typing.Sequence[int]) -> Permutation:
    result = [0] * len(sigma)
    for l, image in enumerate(sigma, start=1):
        result[image - 1] = l

    return tuple(result)
