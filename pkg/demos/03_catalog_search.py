"""
Searching a catalog
===================

Write a small catalog, search every pair of blocks and look at the
certificates that come back.
"""

import json
import tempfile
from pathlib import Path

from tcsmatch import SearchParams, builtin_paper_catalog, parse_catalog, run_search, serialize_certificate
from tcsmatch.catalog import format_catalog
from tcsmatch.search import certificate_id, write_search_output

text = format_catalog(builtin_paper_catalog()) + """
[entry]
name = "toy"
labels = ["H", "E"]
gram = [[2, 0], [0, -2]]
ample = [[1, 0]]
"""
catalog = parse_catalog(text)
print(catalog.names(), catalog.source_digest[:12])

report = run_search(catalog, SearchParams(max_rank=3, coeff_bound=5))
print(report.examined)
for cert in report.valid_certificates:
    print(" ", certificate_id(cert))

# near misses fail exactly one check
for cert in report.near_misses[:5]:
    print(" ", certificate_id(cert), cert.failed_checks)

doc = json.loads(serialize_certificate(report.valid_certificates[0]))
print(doc["kind"], doc["valid"], doc["data"]["c2"])

with tempfile.TemporaryDirectory() as d:
    write_search_output(report, d)
    print(sorted(p.name for p in Path(d).rglob("*.json"))[:4])
