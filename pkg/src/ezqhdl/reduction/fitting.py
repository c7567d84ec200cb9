from __future__ import annotations

import logging
import math
import typing

import numpy as np
import scipy.optimize

from ezqhdl.errors import ReductionError
from ezqhdl.reduction.reduced_slh import set_drift_pairs, reset_drift_pairs

logger = logging.getLogger(__name__)


def _excess_rates(Q_hold: np.ndarray, Q_driven: np.ndarray,
                  pairs: typing.Sequence[typing.Tuple[int, int]]) -> typing.List[float]:
    # pairs are 1-based (target, source); the rate of source -> target is Q[source, target]
    return [Q_driven[s - 1, t - 1] - Q_hold[s - 1, t - 1] for t, s in pairs]


def suggest_drive_amplitude(Q_hold: np.ndarray, Q_set: typing.Optional[np.ndarray],
                            Q_reset: typing.Optional[np.ndarray]) -> float:
    """
    Least-squares |alpha| such that the drift transitions of the SET and RESET conditions run at the HOLD
    rate plus |alpha|^2.

    @return: a non-negative real amplitude
    """
    M = Q_hold.shape[0]
    excess = []
    if Q_set is not None:
        excess += _excess_rates(Q_hold, Q_set, set_drift_pairs(M))
    if Q_reset is not None:
        excess += _excess_rates(Q_hold, Q_reset, reset_drift_pairs(M))

    if not excess:
        raise ReductionError("Fitting the drive amplitude needs SET or RESET data; pass the amplitude explicitly")

    excess = np.array(excess)
    start = math.sqrt(max(float(np.mean(excess)), 1e-6))

    result = scipy.optimize.least_squares(lambda x: x[0] ** 2 - excess, x0=[start], bounds=([0.0], [np.inf]))
    if not result.success:
        raise ReductionError(f"Drive amplitude fit failed: {result.message}")

    alpha = float(result.x[0])
    logger.info(f"Fitted drive amplitude |alpha| = {alpha:.6g} from {len(excess)} drift rates "
                f"(residual cost {result.cost:.3e})")
    return alpha
