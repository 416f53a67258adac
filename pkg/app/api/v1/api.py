"""
API v1 router aggregation.
"""
from fastapi import APIRouter
from app.api.v1.endpoints import health, spectrum, sweeps, topology, walks

api_router = APIRouter()

api_router.include_router(health.router, tags=["health"])
api_router.include_router(topology.router, tags=["topology"])
api_router.include_router(spectrum.router, tags=["spectrum"])
api_router.include_router(walks.router, tags=["walks"])
api_router.include_router(sweeps.router, tags=["sweeps"])
