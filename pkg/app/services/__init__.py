"""
Sweep orchestration and output emission.
"""
