"""
Winding number and gap endpoints for the lossless walk.
"""
import logging
import math

from fastapi import APIRouter, Query

from app.api.v1.dependencies import to_http_error
from app.core.config import settings
from app.core.errors import GapClosed
from app.schemas.walks import GapOut, WindingOut
from app.walk.operators import canonical_angle
from app.walk.topology import gap_at, on_transition_line, winding_number

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/topology")


@router.get("/gap", response_model=GapOut)
def get_gap(
    alpha: float = Query(..., description="α in units of π"),
    beta: float = Query(..., description="β in units of π"),
):
    a, b = canonical_angle(alpha * math.pi), canonical_angle(beta * math.pi)
    gaps = gap_at(a, b)
    return GapOut(alpha=a / math.pi, beta=b / math.pi, gap_zero=gaps.gap_zero, gap_pi=gaps.gap_pi)


@router.get("/winding", response_model=WindingOut)
def get_winding(
    alpha: float = Query(..., description="α in units of π"),
    beta: float = Query(..., description="β in units of π"),
    num_k: int = Query(default=settings.default_num_k, ge=8, le=65536),
):
    """
    Winding number at one point. Closed gaps are reported with W = null
    instead of an error so that callers can scan across phase boundaries.
    """
    a, b = canonical_angle(alpha * math.pi), canonical_angle(beta * math.pi)
    gaps = gap_at(a, b)
    w = raw = residual = None
    try:
        result = winding_number(a, b, num_k, settings.gap_tol, settings.winding_residual_max)
        w, raw, residual = result.value, result.raw_integral, result.residual
    except GapClosed:
        logger.info(f"Winding requested on a closed gap at alpha={alpha}π, beta={beta}π")
    except Exception as e:
        raise to_http_error(e)
    return WindingOut(
        alpha=a / math.pi, beta=b / math.pi, W=w, raw_integral=raw, residual=residual,
        num_k=num_k, gap_zero=gaps.gap_zero, gap_pi=gaps.gap_pi,
        boundary=on_transition_line(a, b, settings.boundary_margin),
    )
