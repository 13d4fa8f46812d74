"""NumPy fallback for the compiled RK4 kernel; same stages, same outputs."""
import numpy as np


def rk4_linear(A, y0, dt, nsteps):
    A = np.ascontiguousarray(A, dtype=np.float64)
    y = np.array(y0, dtype=np.float64)
    out = np.zeros((nsteps + 1, y.size))
    out[0] = y
    half, sixth = 0.5 * dt, dt / 6.0
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, nsteps + 1):
            k1 = A @ y
            k2 = A @ (y + half * k1)
            k3 = A @ (y + half * k2)
            k4 = A @ (y + dt * k3)
            y = y + sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            out[step] = y
            if not np.all(np.isfinite(y)):
                return out, step
    return out, -1
