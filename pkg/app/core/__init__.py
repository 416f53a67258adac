"""
Core application configuration, errors and logging.
"""
