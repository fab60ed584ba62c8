"""Pause the cyclic collector while building large acyclic structures.

Closures and encodings allocate hundreds of thousands of tuples; CPython's
generational GC would rescan them repeatedly without ever finding a cycle.
"""

import functools
import gc
from contextlib import contextmanager


@contextmanager
def gc_paused():
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def without_gc(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with gc_paused():
            return fn(*args, **kwargs)

    return wrapper
