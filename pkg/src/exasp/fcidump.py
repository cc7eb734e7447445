"""Reader/writer for the electronic-integrals file and its dipole companion.

Main file (FCIDUMP-style)::

     &FCI NORB=4,NELEC=4,MS2=0,
      ORBSYM=1,1,1,1,
      ISYM=1,
     &END
     <value>  i  j  k  l

The namelist header runs up to the ``&END`` (or ``/``) line.  Records carry
one float and four 1-based orbital indices: ``i j k l`` is the chemist-order
two-electron integral ``(ij|kl)`` (8-fold permutational symmetry expanded on
read), ``i j 0 0`` the one-body integral ``h_ij``, and ``0 0 0 0`` the scalar
core energy.

Dipole companion file: same record shape, with a bare component tag line
(``X``, ``Y`` or ``Z``) switching the target component; records use ``i j 0 0``
and are expanded symmetrically.
"""

from __future__ import annotations

import numpy as np

from .models import MolecularIntegrals


class IntegralsParseError(ValueError):
    """Malformed integrals file; carries the offending line number."""

    def __init__(self, path: str, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


def _parse_header(path: str, lines: list[str]) -> tuple[dict, int]:
    fields: dict[str, str] = {}
    buf = ""
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        ended = "&END" in stripped.upper() or stripped == "/"
        buf += " " + stripped.replace("&END", "").replace("&end", "").replace("/", "")
        if ended:
            body = buf.replace("&FCI", "").replace("&fci", "")
            body = body.replace("&DIP", "").replace("&dip", "")
            for chunk in body.split(","):
                if "=" in chunk:
                    key, _, val = chunk.partition("=")
                    fields[key.strip().upper()] = val.strip()
                elif chunk.strip() and "=" not in chunk and fields:
                    # continuation of a comma-separated list (e.g. ORBSYM)
                    last = list(fields)[-1]
                    fields[last] += "," + chunk.strip()
            return fields, lineno
    raise IntegralsParseError(path, len(lines), "header not terminated by &END")


def _parse_record(path: str, lineno: int, line: str) -> tuple[float, int, int, int, int]:
    parts = line.split()
    if len(parts) != 5:
        raise IntegralsParseError(path, lineno, f"expected 5 fields, got {len(parts)}")
    try:
        value = float(parts[0])
        i, j, k, l = (int(x) for x in parts[1:])
    except ValueError as exc:
        raise IntegralsParseError(path, lineno, f"non-numeric field: {exc}") from None
    return value, i, j, k, l


def parse_integrals_file(path: str, dipole_path: str | None = None) -> MolecularIntegrals:
    """Read an integrals file (and optional dipole companion)."""
    with open(path) as f:
        lines = f.read().splitlines()
    fields, header_end = _parse_header(path, lines)
    try:
        norb = int(fields["NORB"])
        nelec = int(fields["NELEC"])
    except KeyError as exc:
        raise IntegralsParseError(path, header_end, f"missing header key {exc}") from None
    ms2 = int(fields.get("MS2", "0"))
    orbsym = None
    if "ORBSYM" in fields:
        orbsym = tuple(int(x) for x in fields["ORBSYM"].split(",") if x.strip())

    h = np.zeros((norb, norb))
    eri = np.zeros((norb, norb, norb, norb))
    core = 0.0
    for lineno, line in enumerate(lines[header_end:], start=header_end + 1):
        if not line.strip():
            continue
        value, i, j, k, l = _parse_record(path, lineno, line)
        if max(i, j, k, l) > norb or min(i, j, k, l) < 0:
            raise IntegralsParseError(path, lineno, f"orbital index out of range 1..{norb}")
        if i == 0:
            core = value
        elif k == 0:
            h[i - 1, j - 1] = h[j - 1, i - 1] = value
        else:
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for (p, q, r, s) in ((a, b, c, d), (b, a, c, d), (a, b, d, c), (b, a, d, c),
                                 (c, d, a, b), (d, c, a, b), (c, d, b, a), (d, c, b, a)):
                eri[p, q, r, s] = value

    dipole = np.zeros((3, norb, norb))
    if dipole_path is not None:
        _parse_dipole_file(dipole_path, norb, dipole)
    return MolecularIntegrals(n_orbitals=norb, n_electrons=nelec, core_energy=core,
                              h=h, eri=eri, dipole=dipole, ms2=ms2, orbsym=orbsym)


_COMPONENTS = {"X": 0, "Y": 1, "Z": 2}


def _parse_dipole_file(path: str, norb: int, dipole: np.ndarray) -> None:
    with open(path) as f:
        lines = f.read().splitlines()
    start = 0
    if any("&" in ln for ln in lines[:4]):
        _, start = _parse_header(path, lines)
    component: int | None = None
    for lineno, line in enumerate(lines[start:], start=start + 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.upper() in _COMPONENTS:
            component = _COMPONENTS[stripped.upper()]
            continue
        if component is None:
            raise IntegralsParseError(path, lineno, "record before any component tag")
        value, i, j, k, l = _parse_record(path, lineno, line)
        if k != 0 or l != 0:
            raise IntegralsParseError(path, lineno, "dipole records must be one-body (k=l=0)")
        if not 1 <= i <= norb or not 1 <= j <= norb:
            raise IntegralsParseError(path, lineno, f"orbital index out of range 1..{norb}")
        dipole[component, i - 1, j - 1] = dipole[component, j - 1, i - 1] = value


_FLOAT = " %.17g"
_RECORD = _FLOAT + " %4d %4d %4d %4d\n"


def write_integrals_file(
    m: MolecularIntegrals, path: str, dipole_path: str | None = None, tol: float = 1e-15
) -> None:
    """Write integrals (and optionally dipoles) in the grammar parsed above.

    Only canonical-order entries are emitted; symmetry partners are implied.
    """
    n = m.n_orbitals
    with open(path, "w") as f:
        f.write(f" &FCI NORB={n},NELEC={m.n_electrons},MS2={m.ms2},\n")
        orbsym = m.orbsym if m.orbsym is not None else (1,) * n
        f.write("  ORBSYM=" + ",".join(str(x) for x in orbsym) + ",\n")
        f.write("  ISYM=1,\n")
        f.write(" &END\n")
        for i in range(n):
            for j in range(i + 1):
                for k in range(i + 1):
                    lmax = (j if k == i else k) + 1
                    for l in range(lmax):
                        if abs(m.eri[i, j, k, l]) > tol:
                            f.write(_RECORD % (m.eri[i, j, k, l], i + 1, j + 1, k + 1, l + 1))
        for i in range(n):
            for j in range(i + 1):
                if abs(m.h[i, j]) > tol:
                    f.write(_RECORD % (m.h[i, j], i + 1, j + 1, 0, 0))
        f.write(_RECORD % (m.core_energy, 0, 0, 0, 0))

    if dipole_path is not None:
        with open(dipole_path, "w") as f:
            f.write(f" &DIP NORB={n},\n &END\n")
            for tag, c in _COMPONENTS.items():
                f.write(tag + "\n")
                for i in range(n):
                    for j in range(i + 1):
                        if abs(m.dipole[c, i, j]) > tol:
                            f.write(_RECORD % (m.dipole[c, i, j], i + 1, j + 1, 0, 0))
