"""
Real-space evolution endpoint.
"""
from fastapi import APIRouter

from app.api.v1.dependencies import to_http_error
from app.schemas.walks import EvolveRequest, EvolveResponse, ObservableOut
from app.walk.lattice import new_state, probability_distribution
from app.walk.observables import Normalization, observable_series
from app.walk.operators import evolve, lattice_halfwidth_for

router = APIRouter(prefix="/walks")


@router.post("/evolve", response_model=EvolveResponse)
def post_evolve(request: EvolveRequest):
    """Evolve |0, coin⟩ for t steps and return observables at every step."""
    params = request.to_params(steps=request.t)
    try:
        initial = new_state(lattice_halfwidth_for(request.t), 0, request.coin)
        trajectory = evolve(initial, params)
        records = observable_series(trajectory, request.normalization)
        final = probability_distribution(
            trajectory[-1], normalize=request.normalization is Normalization.POSTSELECT
        )
    except Exception as e:
        raise to_http_error(e)
    return EvolveResponse(
        records=[ObservableOut(**vars(r)) for r in records],
        final_distribution=[[float(x), p] for x, p in final.as_dict().items()],
    )
