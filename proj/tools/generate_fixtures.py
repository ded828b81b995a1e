#!/usr/bin/env python3
# Copyright 2026 The pqelab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the checked-in FCIDUMP fixtures and their .meta sidecars.

Requires PySCF. Not needed to build or test; the outputs live in
data/fixtures/ so the C++ build has no chemistry dependency.

    python3 tools/generate_fixtures.py data/fixtures
"""
import argparse
import os

import numpy as np
from pyscf import fci, gto, scf
from pyscf.tools import fcidump


def frange(lo, hi, step):
    n = int(round((hi - lo) / step))
    return [round(lo + i * step, 4) for i in range(n + 1)]


def h_chain(n):
    def geom(d):
        return [("H", (0.0, 0.0, i * d)) for i in range(n)]
    return geom


def lih(d):
    return [("Li", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, d))]


def beh2(d):
    return [("H", (0.0, 0.0, -d)), ("Be", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, d))]


MOLECULES = {
    "h2": (h_chain(2), sorted(set(frange(0.5, 2.5, 0.25) + [0.7414]))),
    "h4": (h_chain(4), sorted(set(frange(0.4, 3.0, 0.1) + [0.75]))),
    "h6": (h_chain(6), frange(0.5, 3.0, 0.25)),
    "lih": (lih, frange(0.5, 4.0, 0.25)),
    "beh2": (beh2, frange(0.5, 4.0, 0.5)),
}


def run_rhf(mol):
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.max_cycle = 200
    mf.kernel()
    # Follow internal instabilities so stretched geometries land on the
    # lowest RHF solution.
    for _ in range(5):
        mo, _, stable, _ = mf.stability(internal=True, external=False, return_status=True)
        if stable:
            break
        dm = mf.make_rdm1(mo, mf.mo_occ)
        mf.kernel(dm)
    if not mf.converged:
        raise RuntimeError("RHF did not converge")
    return mf


def write_point(outdir, name, geom, d):
    mol = gto.M(atom=geom(d), basis="sto-3g", unit="Angstrom", verbose=0)
    mf = run_rhf(mol)
    tag = f"{name}_{d:.4f}"
    path = os.path.join(outdir, tag + ".fcidump")
    fcidump.from_scf(mf, path, tol=1e-15)

    h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
    eri = mol.ao2mo(mf.mo_coeff, compact=False).reshape([mol.nao] * 4)
    cis = fci.direct_spin1.FCI()
    cis.conv_tol = 1e-13
    nroots = min(4, fci.cistring.num_strings(mol.nao, mol.nelec[0])
                 * fci.cistring.num_strings(mol.nao, mol.nelec[1]))
    e, _ = cis.kernel(h1, eri, mol.nao, mol.nelec, ecore=mol.energy_nuc(),
                      nroots=nroots, max_cycle=500)
    e = np.atleast_1d(e)
    e_gs = e[0]
    excited = [x for x in e[1:] if x > e_gs + 1e-10]

    with open(os.path.join(outdir, tag + ".meta"), "w") as f:
        f.write(f"molecule = {name}\n")
        f.write(f"basis = sto-3g\n")
        f.write(f"bond_distance_angstrom = {d:.4f}\n")
        f.write(f"hf_energy = {mf.e_tot:.15f}\n")
        f.write(f"fci_ground_energy = {e_gs:.15f}\n")
        if excited:
            f.write(f"fci_first_excited_energy = {excited[0]:.15f}\n")
        f.write("orbital_energies = "
                + ", ".join(f"{x:.15f}" for x in mf.mo_energy) + "\n")
    print(f"{tag}: hf={mf.e_tot:.10f} fci={e_gs:.10f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir")
    ap.add_argument("--only", nargs="*", default=None)
    args = ap.parse_args()
    for name, (geom, grid) in MOLECULES.items():
        if args.only and name not in args.only:
            continue
        sub = os.path.join(args.outdir, name)
        os.makedirs(sub, exist_ok=True)
        for d in grid:
            write_point(sub, name, geom, d)


if __name__ == "__main__":
    main()
