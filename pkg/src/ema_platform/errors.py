"""Shared error vocabulary.

Two kinds of failure travel through the platform:

* ``Defect`` values — produced by parsers and validators, collected into
  complete lists so a caller sees every problem at once.
* ``PlatformError`` exceptions — operational failures (authorization,
  conflicts, missing resources).  Each carries a stable machine-readable
  ``code`` and the HTTP status the API layer maps it to.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Defect:
    """One structural or semantic problem found in a submitted document.

    ``subject`` is the element id the defect refers to, or ``None`` for
    document/sheet-level defects.
    """

    code: str
    message: str
    subject: str | None = None

    def as_dict(self) -> dict:
        d = {"code": self.code, "message": self.message}
        if self.subject is not None:
            d["subject"] = self.subject
        return d


class PlatformError(Exception):
    """Base class for operational errors with a stable wire code."""

    code = "internal-error"
    http_status = 500

    def __init__(self, detail: str = "", *, source: str | None = None):
        super().__init__(detail or self.code)
        self.detail = detail or self.code
        self.source = source


class UnauthenticatedError(PlatformError):
    """Missing, unknown, expired, or revoked credential.

    A single indistinguishable class: callers cannot tell which of those
    it was.
    """

    code = "unauthenticated"
    http_status = 401


class NotAuthorizedError(PlatformError):
    code = "not-authorized"
    http_status = 403


class NotAdminError(NotAuthorizedError):
    code = "not-admin"


class NotAnExpertError(NotAuthorizedError):
    code = "not-an-expert"


class NotAMemberError(NotAuthorizedError):
    code = "not-a-member"


class NotVisibleError(NotAuthorizedError):
    code = "not-visible"


class NotFoundError(PlatformError):
    code = "not-found"
    http_status = 404


class UnknownVersionError(NotFoundError):
    code = "unknown-version"


class UnknownTokenError(NotFoundError):
    code = "unknown-token"


class ConflictError(PlatformError):
    code = "conflict"
    http_status = 409


class IdentifierTakenError(ConflictError):
    code = "identifier-taken"


class StaleVersionError(ConflictError):
    code = "stale-version"


class ConcurrentPublishError(ConflictError):
    code = "concurrent-publish"


class AlreadyMemberError(ConflictError):
    code = "already-member"


class StudyClosedError(ConflictError):
    code = "study-closed"


class WrongStateError(ConflictError):
    code = "wrong-state"


class AlreadyUsedError(ConflictError):
    code = "already-used"


class ExpiredTokenError(ConflictError):
    code = "expired-token"


class ValidationError(PlatformError):
    """Request content failed validation; carries the complete defect list."""

    code = "validation-failed"
    http_status = 422

    def __init__(self, defects: list[Defect], detail: str = ""):
        super().__init__(detail or f"{len(defects)} defect(s)")
        self.defects = defects


class ValidationRejectedError(ValidationError):
    """An answer sheet was rejected by questionnaire validation."""

    code = "validation-rejected"


class IncoherentChangesetError(ValidationError):
    code = "incoherent-changeset"


class WeakPasswordError(PlatformError):
    code = "weak-password"
    http_status = 422


class InvalidStarsError(PlatformError):
    code = "invalid-stars"
    http_status = 422


class MalformedRequestError(PlatformError):
    code = "malformed-request"
    http_status = 400


class VersionMismatchError(PlatformError):
    """Caller passed mismatched questionnaire versions.  A programming
    error on the caller's side, never a rejection of user data."""

    code = "version-mismatch"
    http_status = 500


class InvalidZoneError(PlatformError):
    code = "invalid-zone"
    http_status = 422


class ScheduleExhaustedError(PlatformError):
    code = "exhausted"
    http_status = 404


class OutOfRangeCoordinateError(PlatformError):
    code = "out-of-range-coordinate"
    http_status = 422


class StorageUnavailableError(PlatformError):
    code = "storage-unavailable"
    http_status = 503
