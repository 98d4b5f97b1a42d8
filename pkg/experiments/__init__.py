"""experiments package — datasets, Monte Carlo evaluation and experiment runners."""
