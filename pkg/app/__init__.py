"""
qwalk diffusion: split-step quantum walk simulation engine.
"""
