"""Reified arrow programs over effect signatures, plus choreographies with
static endpoint projection, endpoint analysis and selective broadcasting."""

from freer_arrows._core import (
    FreerError,
    Left,
    Located,
    Program,
    Request,
    Right,
    broadcast_targets,
    choreographies,
    choreography,
    collect,
    countdown,
    echo_ws,
    epp,
    forward,
    forward_if,
    get_state,
    participants,
    partners,
    put_state,
    run_mem,
    run_pure,
    run_state,
    run_web,
    ws_get,
    ws_post,
)

__all__ = [
    "FreerError",
    "Left",
    "Located",
    "Program",
    "Request",
    "Right",
    "broadcast_targets",
    "choreographies",
    "choreography",
    "collect",
    "countdown",
    "echo_ws",
    "epp",
    "forward",
    "forward_if",
    "get_state",
    "participants",
    "partners",
    "put_state",
    "run_mem",
    "run_pure",
    "run_state",
    "run_web",
    "ws_get",
    "ws_post",
]
