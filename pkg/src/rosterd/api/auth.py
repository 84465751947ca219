"""Credential storage and session handling.

Passwords live as salted PBKDF2-HMAC-SHA256 digests under
``credential:<email>`` keys; bearer sessions under ``session:<token>``.
The verification side is behind a small provider interface so a
directory-backed login could replace the local table without touching
the HTTP layer.
"""

from __future__ import annotations

import hashlib
import hmac
import ipaddress
import secrets
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from .. import errors

PBKDF2_ITERATIONS = 60_000
SESSION_TTL = timedelta(hours=12)


def _digest(password: str, salt: bytes, iterations: int) -> bytes:
    return hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, iterations)


def credential_key(email: str) -> str:
    return f"credential:{email.strip().lower()}"


def session_key(token: str) -> str:
    return f"session:{token}"


def set_password(store, email: str, account_id: str, password: str) -> None:
    salt = secrets.token_bytes(16)
    record = {
        "account": account_id,
        "salt": salt.hex(),
        "hash": _digest(password, salt, PBKDF2_ITERATIONS).hex(),
        "iterations": PBKDF2_ITERATIONS,
    }
    with store.txn() as txn:
        txn.put(credential_key(email), record)


def drop_credentials(store, email: str, account_id: str) -> None:
    """Remove the login and every live session of an account."""
    with store.txn() as txn:
        txn.delete(credential_key(email))
        for key in store.keys("session:"):
            session = store.get(key)
            if session and session.get("account") == account_id:
                txn.delete(key)


class LocalCredentialProvider:
    """Checks passwords against the store's credential table."""

    def __init__(self, store):
        self.store = store

    def verify(self, email: str, password: str) -> str | None:
        """Return the account id on success, None otherwise."""
        record = self.store.get(credential_key(email))
        if record is None:
            # Burn comparable time so unknown emails are not
            # distinguishable from wrong passwords by latency.
            _digest(password, b"\x00" * 16, PBKDF2_ITERATIONS)
            return None
        want = bytes.fromhex(record["hash"])
        got = _digest(password, bytes.fromhex(record["salt"]), record["iterations"])
        if not hmac.compare_digest(want, got):
            return None
        return record["account"]


@dataclass
class Session:
    token: str
    account: str
    role: str
    issued_at: datetime
    expires_at: datetime
    client_ip: str


def _now() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


def login(store, roster, provider, email: str, password: str,
          client_ip: str = "", now: datetime | None = None) -> Session:
    """Verify credentials and mint a bearer session.

    Anonymized or missing accounts fail exactly like a wrong password;
    the caller learns nothing beyond "bad credentials".
    """
    account_id = provider.verify(email, password)
    if account_id is None:
        raise errors.BadCredentials()
    acct = roster.accounts.get(account_id)
    if acct is None or acct.anonymized:
        raise errors.BadCredentials()
    now = now or _now()
    session = Session(
        token=secrets.token_hex(16),
        account=account_id,
        role=acct.role.value,
        issued_at=now,
        expires_at=now + SESSION_TTL,
        client_ip=client_ip,
    )
    with store.txn() as txn:
        txn.put(session_key(session.token), {
            "account": session.account,
            "role": session.role,
            "issued_at": session.issued_at.isoformat(),
            "expires_at": session.expires_at.isoformat(),
            "client_ip": session.client_ip,
        })
    return session


def logout(store, token: str) -> None:
    with store.txn() as txn:
        txn.delete(session_key(token))


def resolve_session(store, token: str, now: datetime | None = None) -> dict:
    """Look a bearer token up; expired sessions are dropped eagerly."""
    record = store.get(session_key(token))
    if record is None:
        raise errors.BadCredentials()
    now = now or _now()
    if datetime.fromisoformat(record["expires_at"]) <= now:
        logout(store, token)
        raise errors.BadCredentials()
    return record


def ip_allowed(client_ip: str, allowlist) -> bool:
    """True when the allowlist is empty or any CIDR contains the ip."""
    if not allowlist:
        return True
    try:
        addr = ipaddress.ip_address(client_ip)
    except ValueError:
        return False
    for cidr in allowlist:
        try:
            if addr in ipaddress.ip_network(cidr, strict=False):
                return True
        except ValueError:
            continue
    return False
