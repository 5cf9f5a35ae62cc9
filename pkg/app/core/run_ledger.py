"""Opt-in sqlite ledger of CLI runs.

Enabled with `--ledger <path>` or the QPGSIM_LEDGER environment variable.
Failures here are logged and swallowed; they never change a run's result.
"""

import json
import logging
import sqlite3
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

logger = logging.getLogger(__name__)

LEDGER_ENV = "QPGSIM_LEDGER"

# --- Standard Action Types ---
ACTION_RUN_START = "RUN_START"
ACTION_RUN_END = "RUN_END"
ACTION_RUN_LEDGER_INIT_FAILURE = "RUN_LEDGER_INIT_FAILURE"

PathLike = Union[str, Path]

_initialized = set()


def init_ledger(path: PathLike) -> bool:
    """Creates the ledger file and the run_events table if missing.

    Returns:
        True when the table is ready, False if initialisation failed
    """
    path = Path(path)
    conn = None
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        conn = sqlite3.connect(path)
        conn.execute("""
        CREATE TABLE IF NOT EXISTS run_events (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            timestamp TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
            subcommand TEXT NOT NULL,
            action_type TEXT NOT NULL,
            outcome TEXT NOT NULL,
            details TEXT
        )
        """)
        conn.commit()
        _initialized.add(str(path))
        logger.info(f"Run ledger ready at: {path}")
        return True
    except (sqlite3.Error, OSError) as e:
        logger.error(f"Run ledger initialization error at {path}: {e}", exc_info=True)
        return False
    finally:
        if conn:
            conn.close()


def log_run_event(
    path: Optional[PathLike],
    subcommand: str,
    action_type: str,
    outcome: str,
    details: Optional[Dict[str, Any]] = None,
):
    """
    Appends one event to the ledger. Does nothing when path is None.

    Args:
        path: Ledger file
        subcommand: CLI subcommand of the run
        action_type: One of the ACTION_* constants
        outcome: 'INFO', 'SUCCESS' or 'FAILURE'
        details: JSON-serializable context (config echo, seed, exit code, error)
    """
    if path is None:
        return
    path = Path(path)
    if str(path) not in _initialized and not init_ledger(path):
        logger.warning(f"{ACTION_RUN_LEDGER_INIT_FAILURE}: dropping {action_type} event for {subcommand}")
        return

    conn = None
    try:
        details_json = json.dumps(details, sort_keys=True) if details is not None else None
        conn = sqlite3.connect(path)
        conn.execute(
            "INSERT INTO run_events (subcommand, action_type, outcome, details) VALUES (?, ?, ?, ?)",
            (subcommand, action_type, outcome, details_json),
        )
        conn.commit()
    except sqlite3.Error as e:
        logger.error(f"Failed to log run event to SQLite DB: {e}", exc_info=True)
    except (TypeError, ValueError) as e:
        logger.error(f"Failed to serialize run event details to JSON: {e}", exc_info=True)
    finally:
        if conn:
            conn.close()


def read_run_events(path: PathLike, limit: Optional[int] = None) -> List[Dict[str, Any]]:
    """Events in insertion order, details decoded from JSON."""
    conn = sqlite3.connect(Path(path))
    try:
        conn.row_factory = sqlite3.Row
        query = "SELECT * FROM run_events ORDER BY id"
        params = ()
        if limit is not None:
            query += " LIMIT ?"
            params = (int(limit),)
        rows = [dict(row) for row in conn.execute(query, params)]
    finally:
        conn.close()
    for row in rows:
        row["details"] = json.loads(row["details"]) if row["details"] else None
    return rows
