"""Kernel selection: compiled int64 core when built, pure Python otherwise.

Set ``CYCLOMOCK_PURE=1`` to force the Python kernels. Calls into the
compiled core that overflow int64 are transparently rerun in Python.
"""
import os

from . import _kernel_py

try:
    if os.environ.get("CYCLOMOCK_PURE"):
        raise ImportError("pure kernels requested")
    from . import _kernel as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

OP_MUL_PLUS = _kernel_py.OP_MUL_PLUS
OP_MUL_MINUS = _kernel_py.OP_MUL_MINUS
OP_DIV_PLUS = _kernel_py.OP_DIV_PLUS


def run_steps(n, step_ptr, op_code, op_m, term_sign, term_exp):
    if _compiled is not None:
        try:
            return _compiled.run_steps(n, step_ptr, op_code, op_m, term_sign, term_exp)
        except OverflowError:
            pass
    return _kernel_py.run_steps(n, step_ptr, op_code, op_m, term_sign, term_exp)


def reduce_mod(vec, phi):
    if _compiled is not None:
        try:
            return _compiled.reduce_mod(vec, phi)
        except OverflowError:
            pass
    return _kernel_py.reduce_mod(vec, phi)
