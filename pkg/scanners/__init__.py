# Parametrized state families, detection thresholds and q-sweeps
