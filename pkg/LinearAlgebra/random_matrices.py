"""随机矩阵生成器（性质测试与演示用，全部显式传入 numpy Generator）"""
import numpy as np
import scipy.linalg as sla


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    """标准复高斯矩阵"""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar 分布酉矩阵（QR 分解并修正相位）"""
    q, r = sla.qr(random_complex(rng, (n, n)))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases[None, :]


def random_invertible(rng: np.random.Generator, n: int) -> np.ndarray:
    """条件数受控的随机可逆矩阵"""
    return random_complex(rng, (n, n)) + np.sqrt(2 * n) * random_unitary(rng, n)


def random_hermitian_pd(rng: np.random.Generator, n: int) -> np.ndarray:
    x = random_complex(rng, (n, n))
    return x @ x.conj().T + np.eye(n)


def random_density(rng: np.random.Generator, n: int) -> np.ndarray:
    """满秩密度矩阵"""
    rho = random_hermitian_pd(rng, n)
    return rho / np.trace(rho).real
