"""Error metrics and the convergence and comparison studies."""
