"""
Parameter sweep endpoint.
"""
import logging
import math

from fastapi import APIRouter, HTTPException

from app.api.v1.dependencies import to_http_error
from app.core.config import settings
from app.schemas.walks import SweepRequest, SweepRowOut
from app.services.scan_engine import SweepSpec, run_sweep

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/sweeps")


@router.post("", response_model=list[SweepRowOut])
def post_sweep(request: SweepRequest):
    """Run a bounded sweep synchronously; angles in and out are in units of π."""
    row_count = request.alpha_count * len(request.beta) * (1 if request.pt_only else len(set(request.t)))
    if row_count > settings.api_max_sweep_rows:
        raise HTTPException(
            status_code=413,
            detail=f"sweep would produce {row_count} rows (limit {settings.api_max_sweep_rows})",
        )
    try:
        spec = SweepSpec(
            alpha_start=request.alpha_start * math.pi,
            alpha_stop=request.alpha_stop * math.pi,
            alpha_count=request.alpha_count,
            beta_values=[b * math.pi for b in request.beta],
            t_values=request.t,
            l1=request.l1,
            l2=request.l2,
            num_k=request.num_k,
            initial_coin=request.coin,
            normalization=request.normalization,
            pt_only=request.pt_only,
        )
        result = run_sweep(spec)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise to_http_error(e)
    logger.info(f"API sweep returned {len(result)} rows")
    return [
        SweepRowOut(**{**vars(row), "alpha": row.alpha / math.pi, "beta": row.beta / math.pi})
        for row in result.rows
    ]
