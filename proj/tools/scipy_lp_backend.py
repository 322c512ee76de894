#!/usr/bin/env python3
# Copyright 2026 The PolyRepair Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""External LP backend for polyrepair: solves a JSON problem with HiGHS.

Usage: scipy_lp_backend.py PROBLEM.json SOLUTION.json
"""

import json
import sys

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix


def rows_to_matrix(rows, n):
    data, ri, ci = [], [], []
    for i, row in enumerate(rows):
        for col, coeff in row:
            ri.append(i)
            ci.append(col)
            data.append(coeff)
    return coo_matrix((data, (ri, ci)), shape=(len(rows), n)).tocsr()


def main(argv):
    with open(argv[1]) as f:
        problem = json.load(f)
    n = problem["num_vars"]
    c = np.zeros(n)
    for col, coeff in problem["objective"]["coeffs"]:
        c[col] += coeff

    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for con in problem["constraints"]:
        coeffs, rhs = con["coeffs"], con["rhs"]
        if con["rel"] == "<=":
            ub_rows.append(coeffs)
            ub_rhs.append(rhs)
        elif con["rel"] == ">=":
            ub_rows.append([(col, -v) for col, v in coeffs])
            ub_rhs.append(-rhs)
        else:
            eq_rows.append(coeffs)
            eq_rhs.append(rhs)

    bounds = list(zip(problem["lower"], problem["upper"]))
    kwargs = {"bounds": bounds, "method": "highs"}
    if ub_rows:
        kwargs["A_ub"] = rows_to_matrix(ub_rows, n)
        kwargs["b_ub"] = np.array(ub_rhs)
    if eq_rows:
        kwargs["A_eq"] = rows_to_matrix(eq_rows, n)
        kwargs["b_eq"] = np.array(eq_rhs)
    res = linprog(c, **kwargs)

    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}.get(res.status, "error")
    out = {"status": status, "message": res.message, "iterations": int(res.nit)}
    if status == "optimal":
        out["x"] = [float(v) for v in res.x]
        out["objective"] = float(res.fun) + problem["objective"]["constant"]
    with open(argv[2], "w") as f:
        json.dump(out, f)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
