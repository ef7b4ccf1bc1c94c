"""
Angle kernels
=============

Hot loops for evaluating realized angle sums and their Jacobians.

A system of angle sums is flattened into parallel term arrays: for term
``k`` the angle at vertex ``vertex[k]`` between petals ``pa[k]`` and
``pb[k]`` contributes ``weight[k]`` times its value to row
``row[k]``. Two implementations share this layout, a Numba one and a
plain NumPy one. The NumPy path is used when Numba is missing or when the
environment variable ``CORONAL_DISABLE_NUMBA`` is set to a non-empty value
other than ``0``.
"""

import os

import numpy as np

_DISABLE = os.environ.get("CORONAL_DISABLE_NUMBA", "") not in ("", "0")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _DISABLE


# ---------------------------------------------------------------------------
# NumPy reference path
# ---------------------------------------------------------------------------


def _np_cosine(c, a, b):
    return 1.0 - 2.0 * a * b / ((c + a) * (c + b))


def _np_slot_partials(c, a, b):
    """Derivatives of one angle with respect to its vertex and two petal
    slots, treating the three radii as independent variables."""
    s = np.sqrt(a + b + c)
    dv = -(a + b + 2.0 * c) * np.sqrt(a * b) / (
        (c * c + a * b + a * c + b * c) * np.sqrt(c) * s
    )
    da = np.sqrt(b * c) / ((c + a) * np.sqrt(a) * s)
    db = np.sqrt(a * c) / ((c + b) * np.sqrt(b) * s)
    return dv, da, db


def np_angles(vertex, pa, pb, rho):
    rho = np.asarray(rho, dtype=np.float64)
    arg = _np_cosine(rho[vertex], rho[pa], rho[pb])
    return np.arccos(np.clip(arg, -1.0, 1.0))


def np_system_values(row, vertex, pa, pb, weight, rho, n_rows):
    ang = np_angles(vertex, pa, pb, rho)
    return np.bincount(row, weights=weight * ang, minlength=n_rows)


def np_system_jacobian(row, vertex, pa, pb, weight, rho, n_rows):
    rho = np.asarray(rho, dtype=np.float64)
    c, a, b = rho[vertex], rho[pa], rho[pb]
    ang = np.arccos(np.clip(_np_cosine(c, a, b), -1.0, 1.0))
    values = np.bincount(row, weights=weight * ang, minlength=n_rows)
    dv, da, db = _np_slot_partials(c, a, b)
    jac = np.zeros((n_rows, rho.shape[0]))
    np.add.at(jac, (row, vertex), weight * dv)
    np.add.at(jac, (row, pa), weight * da)
    np.add.at(jac, (row, pb), weight * db)
    return values, jac


def np_system_values_batch(row, vertex, pa, pb, weight, rhos, n_rows):
    rhos = np.atleast_2d(np.asarray(rhos, dtype=np.float64))
    arg = _np_cosine(rhos[:, vertex], rhos[:, pa], rhos[:, pb])
    ang = np.arccos(np.clip(arg, -1.0, 1.0)) * weight
    out = np.zeros((rhos.shape[0], n_rows))
    for r in range(n_rows):
        out[:, r] = ang[:, row == r].sum(axis=1)
    return out


# ---------------------------------------------------------------------------
# Numba path
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def _nb_angle(c, a, b):
        arg = 1.0 - 2.0 * a * b / ((c + a) * (c + b))
        if arg > 1.0:
            arg = 1.0
        elif arg < -1.0:
            arg = -1.0
        return np.arccos(arg)

    @numba.njit(cache=True, nogil=True)
    def nb_angles(vertex, pa, pb, rho):
        out = np.empty(vertex.shape[0])
        for k in range(vertex.shape[0]):
            out[k] = _nb_angle(rho[vertex[k]], rho[pa[k]], rho[pb[k]])
        return out

    @numba.njit(cache=True, nogil=True)
    def nb_system_values(row, vertex, pa, pb, weight, rho, n_rows):
        out = np.zeros(n_rows)
        for k in range(row.shape[0]):
            out[row[k]] += weight[k] * _nb_angle(
                rho[vertex[k]], rho[pa[k]], rho[pb[k]]
            )
        return out

    @numba.njit(cache=True, nogil=True)
    def nb_system_jacobian(row, vertex, pa, pb, weight, rho, n_rows):
        values = np.zeros(n_rows)
        jac = np.zeros((n_rows, rho.shape[0]))
        for k in range(row.shape[0]):
            c = rho[vertex[k]]
            a = rho[pa[k]]
            b = rho[pb[k]]
            w = weight[k]
            r = row[k]
            values[r] += w * _nb_angle(c, a, b)
            s = np.sqrt(a + b + c)
            dv = -(a + b + 2.0 * c) * np.sqrt(a * b) / (
                (c * c + a * b + a * c + b * c) * np.sqrt(c) * s
            )
            da = np.sqrt(b * c) / ((c + a) * np.sqrt(a) * s)
            db = np.sqrt(a * c) / ((c + b) * np.sqrt(b) * s)
            jac[r, vertex[k]] += w * dv
            jac[r, pa[k]] += w * da
            jac[r, pb[k]] += w * db
        return values, jac

    @numba.njit(cache=True, nogil=True)
    def nb_system_values_batch(row, vertex, pa, pb, weight, rhos, n_rows):
        out = np.zeros((rhos.shape[0], n_rows))
        for i in range(rhos.shape[0]):
            for k in range(row.shape[0]):
                out[i, row[k]] += weight[k] * _nb_angle(
                    rhos[i, vertex[k]], rhos[i, pa[k]], rhos[i, pb[k]]
                )
        return out


if USE_NUMBA:
    angles = nb_angles
    system_values = nb_system_values
    system_jacobian = nb_system_jacobian
    _batch = nb_system_values_batch
else:
    angles = np_angles
    system_values = np_system_values
    system_jacobian = np_system_jacobian
    _batch = np_system_values_batch


def system_values_batch(row, vertex, pa, pb, weight, rhos, n_rows):
    """Evaluate every row at each row of ``rhos`` (shape ``(B, n)``)."""
    rhos = np.ascontiguousarray(np.atleast_2d(rhos), dtype=np.float64)
    return _batch(row, vertex, pa, pb, weight, rhos, n_rows)
