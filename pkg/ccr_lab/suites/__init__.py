"""Verification suites; every module exposes one `Suite` picked up by ccr_lab.main.discover_suites."""
