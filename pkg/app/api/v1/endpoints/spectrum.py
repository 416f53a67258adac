"""
Quasi-energy spectrum and PT-phase endpoints.
"""
from fastapi import APIRouter

from app.api.v1.dependencies import to_http_error
from app.core.config import settings
from app.schemas.walks import PTPhaseOut, SpectrumOut, SpectrumRequest
from app.walk.momentum import pt_phase_classify, quasienergy_spectrum

router = APIRouter(prefix="/spectrum")


@router.post("", response_model=SpectrumOut)
def post_spectrum(request: SpectrumRequest):
    """Both quasi-energy bands of u(k) on a uniform k-grid, upper band first."""
    try:
        samples = quasienergy_spectrum(request.to_params(), request.num_k, settings.gap_tol)
    except Exception as e:
        raise to_http_error(e)
    return SpectrumOut(
        k=[s.k for s in samples],
        quasi_energy_real=[[e.real for e in s.quasi_energies] for s in samples],
        quasi_energy_imag=[[e.imag for e in s.quasi_energies] for s in samples],
        modulus=[[abs(lam) for lam in s.eigenvalues] for s in samples],
    )


@router.post("/pt-phase", response_model=PTPhaseOut)
def post_pt_phase(request: SpectrumRequest):
    try:
        phase = pt_phase_classify(
            request.to_params(), request.num_k, settings.pt_tol, settings.pt_snap_window
        )
    except Exception as e:
        raise to_http_error(e)
    return PTPhaseOut(
        tag=phase.tag.value,
        max_modulus_split=phase.max_modulus_split,
        real_part=phase.real_part,
        k_at_max_split=phase.k_at_max_split,
    )
