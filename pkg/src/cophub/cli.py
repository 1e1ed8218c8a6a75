"""Operator command line: seeding, serving, pruning, statistics, fixtures.

Exit codes are stable for scripting: 0 on success, 1 on any engine/store
error (the error's code is printed), 2 on usage errors. Commands that open
a data directory take its lock first, so mutating commands never race a
running server.
"""

from __future__ import annotations

import functools
import json
import socket
import sys
from contextlib import contextmanager
from pathlib import Path

import click
from filelock import FileLock, Timeout

from .api import ServiceConfig, build_app
from .engine import Engine, EngineConfig
from .errors import BadConfig, CophubError, PortInUse, StoreLocked
from .fixtures import build_fig3
from .seed_io import export_seed, read_seed_file, tutoring_seed_doc
from .store import Store, read_state_file, write_state_file
from .taxonomy import PrunePolicy, USAGE_KINDS


def fail_on_engine_errors(command):
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except CophubError as exc:
            click.echo(f"error: {exc.code}: {exc.message}", err=True)
            sys.exit(1)

    return wrapper


class DataDir:
    def __init__(self, path: Path, engine_config: EngineConfig | None = None):
        self.path = path
        self.engine_config = engine_config or EngineConfig()
        self._lock = FileLock(str(path / ".lock"))

    def acquire(self) -> None:
        self.path.mkdir(parents=True, exist_ok=True)
        try:
            self._lock.acquire(timeout=0)
        except Timeout:
            raise StoreLocked(
                f"data directory {self.path} is locked (a server is probably running)"
            ) from None

    def release(self) -> None:
        self._lock.release()

    def open_engine(self) -> Engine:
        return Engine(store=Store(self.path), config=self.engine_config)

    @contextmanager
    def session(self):
        """Locked engine for one command; serve holds the lock manually."""
        self.acquire()
        engine = self.open_engine()
        try:
            yield engine
        finally:
            engine.close()
            self.release()


pass_datadir = click.make_pass_decorator(DataDir)


@click.group()
@click.option(
    "--data",
    "data_dir",
    type=click.Path(path_type=Path),
    default=Path("./data"),
    show_default=True,
    help="Data directory holding the snapshot, log and blobs.",
)
@click.option("--allow-member-roots", is_flag=True, help="Let members create level-1 categories.")
@click.option("--prune-min-age", type=float, default=90.0, show_default=True,
              help="Default minimum subject age (days) for pruning.")
@click.option("--prune-usage-window", type=float, default=None,
              help="Default pruning usage window (days); whole lifetime when omitted.")
@click.pass_context
def main(ctx, data_dir: Path, allow_member_roots: bool,
         prune_min_age: float, prune_usage_window: float | None):
    """Administer a communities-of-practice knowledge hub."""
    ctx.obj = DataDir(
        data_dir,
        EngineConfig(
            allow_member_roots=allow_member_roots,
            prune_min_age_days=prune_min_age,
            prune_usage_window_days=prune_usage_window,
        ),
    )


# -- seed ----------------------------------------------------------------------

@main.group()
def seed():
    """Import or export the subject classification."""


@seed.command("import")
@click.argument("file", type=click.Path(path_type=Path))
@pass_datadir
@fail_on_engine_errors
def seed_import(datadir: DataDir, file: Path):
    """Load a seed document into a fresh data directory."""
    with datadir.session() as engine:
        engine.load_seed(read_seed_file(file))
        engine.checkpoint()
        click.echo(
            f"imported {len(engine.taxonomy)} subjects (taxonomy version {engine.taxonomy_version})"
        )


@seed.command("export")
@click.argument("file", type=click.Path(path_type=Path))
@pass_datadir
@fail_on_engine_errors
def seed_export(datadir: DataDir, file: Path):
    """Write the active classification as a seed document."""
    with datadir.session() as engine:
        doc = export_seed(engine.taxonomy)
    file.write_text(json.dumps(doc, indent=2) + "\n", "utf-8")
    click.echo(f"exported {len(doc['subjects'])} subjects to {file}")


# -- serve ----------------------------------------------------------------------

@main.command()
@click.option("--bind", default="127.0.0.1", show_default=True, help="Address to listen on.")
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--seed", "seed_path", type=click.Path(path_type=Path), default=None,
              help="Seed document loaded when the taxonomy is empty (default: shipped tutoring seed).")
@click.option("--admin-token", default="admin", show_default=True)
@click.option("--session-ttl", default=86400.0, show_default=True, type=float,
              help="Session lifetime in seconds.")
@click.option("--cors-origin", "cors_origins", multiple=True,
              help="Allowed browser origin (repeatable; default *).")
@pass_datadir
@fail_on_engine_errors
def serve(datadir: DataDir, bind: str, port: int, seed_path: Path | None,
          admin_token: str, session_ttl: float, cors_origins: tuple[str, ...]):
    """Run the HTTP service."""
    import uvicorn

    datadir.acquire()
    engine = datadir.open_engine()
    if len(engine.taxonomy) == 0:
        if seed_path is not None:
            if not seed_path.exists():
                raise BadConfig(f"seed path {seed_path} does not exist")
            engine.load_seed(read_seed_file(seed_path))
        else:
            engine.load_seed(tutoring_seed_doc())
        engine.checkpoint()

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((bind, port))
    except OSError as exc:
        raise PortInUse(f"cannot bind {bind}:{port}: {exc}") from exc
    finally:
        probe.close()

    app = build_app(
        engine,
        ServiceConfig(
            admin_token=admin_token,
            session_ttl=session_ttl,
            cors_origins=list(cors_origins) or ["*"],
        ),
    )
    click.echo(f"serving on http://{bind}:{port} (data: {datadir.path})")
    uvicorn.run(app, host=bind, port=port, log_level="warning")


# -- prune ---------------------------------------------------------------------

@main.command()
@click.option("--min-age", "min_age_days", default=90.0, show_default=True, type=float,
              help="Minimum subject age in days before pruning.")
@click.option("--usage-window", "usage_window_days", default=None, type=float,
              help="Only usage within this many days counts (default: whole lifetime).")
@click.option("--dry-run", is_flag=True, help="List candidates without deprecating them.")
@pass_datadir
@fail_on_engine_errors
def prune(datadir: DataDir, min_age_days: float, usage_window_days: float | None, dry_run: bool):
    """Deprecate member-added subjects that nothing uses or references."""
    with datadir.session() as engine:
        policy = PrunePolicy(min_age_days=min_age_days, usage_window_days=usage_window_days)
        subjects = engine.prune_unused(policy=policy, dry_run=dry_run)
        verb = "would deprecate" if dry_run else "deprecated"
        click.echo(f"{verb} {len(subjects)} subject(s)")
        for subject_id in subjects:
            click.echo(f"  {subject_id}  {engine.subject(subject_id).label}")


# -- stats ----------------------------------------------------------------------

@main.group()
def stats():
    """Inspect usage statistics."""


@stats.command("subjects")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table",
              show_default=True)
@pass_datadir
@fail_on_engine_errors
def stats_subjects(datadir: DataDir, fmt: str):
    """Per-subject usage, association and membership counts."""
    with datadir.session() as engine:
        rows = engine.subject_stats()
    if fmt == "json":
        click.echo(json.dumps(rows, indent=2))
        return
    headers = ["id", "label", "lvl", "status", *USAGE_KINDS, "assoc", "members"]
    table = [
        [
            row["id"],
            row["label"],
            str(row["level"]),
            row["status"],
            *(str(row["usage"][kind]) for kind in USAGE_KINDS),
            str(row["association_count"]),
            str(row["member_count"]),
        ]
        for row in rows
    ]
    widths = [max(len(h), *(len(r[i]) for r in table)) if table else len(h) for i, h in enumerate(headers)]
    click.echo("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)))
    for r in table:
        click.echo("  ".join(r[i].ljust(widths[i]) for i in range(len(headers))))


# -- fixtures, purge, state backup ------------------------------------------------

@main.group()
def fixture():
    """Materialize canonical fixtures for demos and tests."""


@fixture.command("fig3")
@pass_datadir
@fail_on_engine_errors
def fixture_fig3(datadir: DataDir):
    """Tutoring seed, three tutors and their sample discussions."""
    with datadir.session() as engine:
        handles = build_fig3(engine)
        engine.checkpoint()
    click.echo(
        f"fixture ready: tutors {handles.tutor1},{handles.tutor2},{handles.tutor3}; "
        f"discussions {handles.discussion_collective},{handles.discussion_universities},"
        f"{handles.discussion_courses}"
    )


@main.command()
@click.argument("subject_id")
@pass_datadir
@fail_on_engine_errors
def purge(datadir: DataDir, subject_id: str):
    """Hard-delete a deprecated, unreferenced subject."""
    with datadir.session() as engine:
        engine.purge_subject(subject_id)
        engine.checkpoint()
    click.echo(f"purged {subject_id}")


@main.group()
def resource():
    """Operator actions on resources."""


@resource.command("delete")
@click.argument("resource_id")
@pass_datadir
@fail_on_engine_errors
def resource_delete(datadir: DataDir, resource_id: str):
    """Remove a resource with its replies and subject associations.
    Members regulate through subject removal; full deletion is operator-only."""
    with datadir.session() as engine:
        engine.delete_resource(resource_id)
        engine.checkpoint()
    click.echo(f"deleted {resource_id}")


@main.group()
def state():
    """Full-state backup and restore."""


@state.command("export")
@click.argument("file", type=click.Path(path_type=Path))
@pass_datadir
@fail_on_engine_errors
def state_export(datadir: DataDir, file: Path):
    with datadir.session() as engine:
        write_state_file(engine.export_state(), file)
    click.echo(f"state written to {file}")


@state.command("import")
@click.argument("file", type=click.Path(path_type=Path))
@pass_datadir
@fail_on_engine_errors
def state_import(datadir: DataDir, file: Path):
    with datadir.session() as engine:
        engine.import_state(read_state_file(file))
    click.echo(f"state restored from {file}")


if __name__ == "__main__":
    main()
