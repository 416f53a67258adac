"""
API routes and endpoints.
"""


