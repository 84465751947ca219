"""rosterd: staff rostering for small teams.

Shift schedules, availability and quota checks, shift exchange
workflows, reporting, and a small HTTP service plus admin CLI on top.
"""

__version__ = "0.1.0"
