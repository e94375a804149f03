"""Direct download of PDB entries as mmCIF."""

from __future__ import annotations

import os
import re
import urllib.error
import urllib.request

from .. import __version__
from ..errors import InvalidId, NetworkError, NotFound
from .formats import FormatId

DEFAULT_BASE_URL = "https://files.rcsb.org/download"
_ID_RE = re.compile(r"^[0-9][A-Za-z0-9]{3}$")


def fetch_pdb(accession: str, base_url: str | None = None,
              timeout: float = 30.0) -> tuple[bytes, FormatId]:
    """GET <base>/<ID>.cif; MOLVIEW_PDB_MIRROR overrides the base URL."""
    if not _ID_RE.match(accession or ""):
        raise InvalidId(f"not a PDB accession: {accession!r}")
    base = base_url or os.environ.get("MOLVIEW_PDB_MIRROR") or DEFAULT_BASE_URL
    url = f"{base.rstrip('/')}/{accession.upper()}.cif"
    req = urllib.request.Request(
        url, headers={"User-Agent": f"molview-engine/{__version__}"}
    )
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return resp.read(), FormatId.MMCIF
    except urllib.error.HTTPError as exc:
        if exc.code == 404:
            raise NotFound(f"no PDB entry {accession.upper()}") from exc
        raise NetworkError(f"HTTP {exc.code} fetching {url}") from exc
    except urllib.error.URLError as exc:
        raise NetworkError(f"cannot reach {url}: {exc.reason}") from exc
    except TimeoutError as exc:
        raise NetworkError(f"timeout fetching {url}") from exc
