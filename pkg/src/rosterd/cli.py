"""Operator command line.

Exit codes follow a scripting contract: 0 success, 1 partial result
(auto-schedule left shifts unfilled), 2 error.
"""

from __future__ import annotations

import sys
from datetime import date, datetime, timezone

import click

from . import errors
from .api import auth as authmod
from .api.app import create_app
from .engine.autoschedule import AutoScheduleParams, auto_schedule
from .fixtures import load_fixture, seed_roster
from .model import validation
from .reporting import ical as icalmod
from .reporting import reports as repmod
from .store import KVStore, Repo
from .timeutil import Interval

DATA_OPTION = click.option(
    "--data", "data_path", envvar="ROSTERD_DATA", required=True,
    type=click.Path(dir_okay=False),
    help="Path to the roster database file.")


def _repo(data_path: str) -> Repo:
    return Repo(KVStore(data_path))


def _fail(exc: errors.RosterError):
    click.echo(f"error: {exc.code}: {exc}", err=True)
    sys.exit(2)


def _parse_range(text: str) -> tuple[date, date]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise errors.BadFlags(f"--range must look like A..B, got {text!r}")
    try:
        start = date.fromisoformat(lo.strip())
        end = date.fromisoformat(hi.strip())
    except ValueError:
        raise errors.BadFlags(f"--range has a bad date in {text!r}") from None
    if start >= end:
        raise errors.BadFlags(f"--range is empty or reversed: {text!r}")
    return start, end


def _resolve_account(roster, ref: str) -> str:
    """Accept an account id, or an email for convenience."""
    if "@" in ref:
        for acct in roster.accounts.values():
            if not acct.anonymized and acct.email == ref:
                return acct.id
        raise errors.UnknownAccount(ref)
    roster.account(ref)
    return ref


@click.group()
def main():
    """Staff roster administration."""


@main.command()
@DATA_OPTION
@click.argument("fixture", type=click.Path(exists=True, dir_okay=False))
def seed(data_path, fixture):
    """Load FIXTURE (YAML) into the database; re-running upserts."""
    try:
        doc = load_fixture(fixture)
        repo = _repo(data_path)
        counts, credentials = repo.mutate(lambda work: seed_roster(work, doc))
        for email, account_id, password in credentials:
            authmod.set_password(repo.store, email, account_id, password)
    except errors.RosterError as exc:
        _fail(exc)
    click.echo(", ".join(f"{kind}: {n}" for kind, n in counts.items()))


@main.command()
@DATA_OPTION
@click.option("--range", "date_range", required=True,
              help="Inclusive..exclusive date range, e.g. 2021-09-01..2021-10-27.")
@click.option("--schedule", "schedules", multiple=True,
              help="Restrict to a schedule id (repeatable).")
@click.option("--account", "accounts", multiple=True,
              help="Restrict to an account id (repeatable).")
@click.option("--group-by", default="",
              help="Comma-separated dimensions (account, schedule, position, "
                   "location, day, week, month).")
@click.option("--include-pay", is_flag=True, help="Add pay columns.")
def report(data_path, date_range, schedules, accounts, group_by, include_pay):
    """Print a CSV report to stdout."""
    try:
        lo, hi = _parse_range(date_range)
        dims = tuple(d for d in (p.strip() for p in group_by.split(",")) if d)
        query = repmod.ReportQuery(
            date_range=(lo, hi),
            schedules=frozenset(schedules),
            accounts=frozenset(accounts),
            group_by=dims,
            include_pay=include_pay,
        )
        repo = _repo(data_path)
        rows = repmod.run_report(repo.roster, query)
        data = repmod.export_csv(rows, group_by=dims, include_pay=include_pay)
    except errors.RosterError as exc:
        _fail(exc)
    sys.stdout.buffer.write(data)
    sys.stdout.buffer.flush()


@main.command()
@DATA_OPTION
@click.option("--schedule", "schedules", multiple=True, required=True,
              help="Schedule id to fill (repeatable).")
@click.option("--range", "date_range", required=True,
              help="Date range to fill, e.g. 2021-09-01..2021-09-15.")
@click.option("--favorites-only", is_flag=True,
              help="Only consider each shift's favorites.")
@click.option("--max-shifts-per-day", type=int, default=None)
@click.option("--min-gap", type=int, default=None,
              help="Minimum rest between assignments, in minutes.")
@click.option("--seed", "seed_value", type=int, default=0,
              help="Tie-break seed (reserved; runs are deterministic).")
def autoschedule(data_path, schedules, date_range, favorites_only,
                 max_shifts_per_day, min_gap, seed_value):
    """Fill understaffed shifts; exits 1 if any remain unfilled."""
    try:
        lo, hi = _parse_range(date_range)
        params = AutoScheduleParams(
            schedules=frozenset(schedules),
            date_range=(lo, hi),
            favorites_only=favorites_only,
            max_shifts_per_day=max_shifts_per_day,
            min_gap=min_gap,
            seed=seed_value,
        )
        repo = _repo(data_path)
        result = repo.mutate(lambda work: auto_schedule(work, params))
    except errors.RosterError as exc:
        _fail(exc)
    for shift_id, account_id in result.assignments:
        click.echo(f"assign {shift_id} {account_id}")
    for shift_id in result.unfilled:
        click.echo(f"unfilled {shift_id}")
    click.echo(f"assigned: {len(result.assignments)}, "
               f"unfilled: {len(result.unfilled)}")
    if result.unfilled:
        sys.exit(1)


@main.command()
@DATA_OPTION
@click.option("--mode", type=click.Choice(["delete", "anonymize"]),
              required=True)
@click.argument("account")
def purge(data_path, mode, account):
    """Remove or tokenize an ACCOUNT (id or email)."""
    try:
        repo = _repo(data_path)
        account_id = _resolve_account(repo.roster, account)
        email = repo.roster.account(account_id).email
        if mode == "anonymize":
            tokenized = repo.mutate(
                lambda work: validation.anonymize_account(work, account_id))
            authmod.drop_credentials(repo.store, email, account_id)
            click.echo(f"anonymized {account_id} as {tokenized.given_name}")
        else:
            now = datetime.now(timezone.utc).replace(second=0, microsecond=0)
            summary = repo.mutate(
                lambda work: validation.delete_account(work, account_id, now))
            authmod.drop_credentials(repo.store, email, account_id)
            click.echo(
                f"deleted {account_id}: "
                f"{summary['future_unassigned']} future shifts unassigned, "
                f"{summary['past_repointed']} past assignments re-pointed")
    except errors.RosterError as exc:
        _fail(exc)


@main.group()
def ical():
    """iCalendar import and export."""


@ical.command("export")
@DATA_OPTION
@click.option("--account", required=True, help="Account id or email.")
@click.option("--range", "date_range", required=True,
              help="Date range, e.g. 2021-09-01..2021-10-27.")
def ical_export(data_path, account, date_range):
    """Write the account's assignments as an iCalendar feed to stdout."""
    try:
        repo = _repo(data_path)
        account_id = _resolve_account(repo.roster, account)
        lo, hi = _parse_range(date_range)
        tz = repo.roster.tz
        window_start = datetime(lo.year, lo.month, lo.day, tzinfo=tz)
        window_end = datetime(hi.year, hi.month, hi.day, tzinfo=tz)
        window = Interval(window_start.astimezone(timezone.utc),
                          window_end.astimezone(timezone.utc))
        data = icalmod.export_ical(repo.roster, account_id, window)
    except errors.RosterError as exc:
        _fail(exc)
    sys.stdout.buffer.write(data)
    sys.stdout.buffer.flush()


@ical.command("import")
@DATA_OPTION
@click.option("--account", required=True, help="Account id or email.")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def ical_import(data_path, account, path):
    """Import an iCalendar file as time-off records."""
    try:
        repo = _repo(data_path)
        account_id = _resolve_account(repo.roster, account)
        with open(path, "rb") as fh:
            data = fh.read()
        _, warnings = icalmod.parse_ical(data)
        records = repo.mutate(
            lambda work: icalmod.import_ical_time_off(work, account_id, data))
    except errors.RosterError as exc:
        _fail(exc)
    for warning in warnings:
        click.echo(f"warning: {warning}", err=True)
    click.echo(f"imported: {len(records)}")


@main.command()
@DATA_OPTION
@click.option("--host", envvar="ROSTERD_HOST", default="127.0.0.1",
              show_default=True)
@click.option("--port", envvar="ROSTERD_PORT", type=int, default=8437,
              show_default=True)
@click.option("--locale", envvar="ROSTERD_LOCALE", default=None,
              help="Override the default locale before serving.")
@click.option("--allowlist", envvar="ROSTERD_ALLOWLIST", default=None,
              help="Comma-separated CIDRs to restrict clients to.")
def serve(data_path, host, port, locale, allowlist):
    """Run the HTTP service."""
    try:
        import uvicorn
    except ImportError:
        click.echo("error: uvicorn is not installed; "
                   "install the server extra", err=True)
        sys.exit(2)
    try:
        repo = _repo(data_path)
        if locale is not None or allowlist is not None:
            import dataclasses

            from .model.records import Locale as LocaleEnum

            def tune(work):
                fields = {}
                if locale is not None:
                    fields["locale_default"] = LocaleEnum(locale)
                if allowlist is not None:
                    fields["ip_allowlist"] = tuple(
                        p.strip() for p in allowlist.split(",") if p.strip())
                work.put_settings(
                    dataclasses.replace(work.settings, **fields))

            repo.mutate(tune)
    except (errors.RosterError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    app = create_app(repo=repo)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
