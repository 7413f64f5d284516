# Copyright (C) 2026 The hekl Authors
# SPDX-License-Identifier: Apache-2.0
"""NTT, RNS and CKKS primitives."""

import json as _json

from ._hekl import *  # noqa: F401,F403
from ._hekl import run_bench as _run_bench


def bench(command, **kwargs):
    """Runs a benchmark command and returns the parsed JSON report."""
    return _json.loads(_run_bench(command, **kwargs))
