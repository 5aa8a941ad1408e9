"""Rate evaluation, time stepping, the adaptive window and run orchestration."""
