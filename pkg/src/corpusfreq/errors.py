"""Shared exception base for all corpusfreq validation failures."""


class CorpusError(Exception):
    """Base class for every error this package raises on bad input.

    The CLI maps any CorpusError to a diagnostic on stderr and exit
    status 1; everything else is a genuine bug and propagates.
    """
