"""A full certified run of the two-sided-ideal inclusion on one cell.

Every nested-product generator is tested for membership in the span of the
relation family; each hit is recorded as an exact linear combination and
independently replayed from a fresh context.
"""

import os
import tempfile

from twistedzhu import make_config, run_check, verify_certificate_file

cert_dir = tempfile.mkdtemp(prefix="zhu-certs-")
cfg = make_config(voa="heisenberg", T=2, g1="neg", n="1/2", m="0",
                  param_cap=1, weight_cap=2, cert_dir=cert_dir)
report, code = run_check("dj-conjecture", cfg)
sub = report["subcases"][0]
print("cell (1/2, 0):", sub["status"], "-",
      sub["cases"], "generators,", sub["distinct_targets"],
      "distinct targets")

path = sub["certificate_file"]
print("certificate file:", os.path.basename(path),
      f"({os.path.getsize(path)} bytes)")
replay, rcode = verify_certificate_file(path)
print("independent replay:", "ok" if rcode == 0 else "FAILED",
      "-", replay["targets"], "targets re-verified")
