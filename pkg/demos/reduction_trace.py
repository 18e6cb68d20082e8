"""Run the apex -> restricted -> defect chain and show the oracle audit."""

import random

from pdcount.brute import BruteDefectOracle, brute_perfmatch
from pdcount.generators import random_promise_instance
from pdcount.reductions import DEFECT, RESTRICTED, OracleTranscript, apex_to_defect, audit

inst = random_promise_instance(8, 2, random.Random(3))
transcript = OracleTranscript()
count = apex_to_defect(inst, BruteDefectOracle(max_vertices=128), transcript)
print("count via reductions:", count, " direct:", brute_perfmatch(inst.to_graph()))
for problem in (RESTRICTED, DEFECT):
    top, n = audit(transcript, problem)
    print(f"{problem}: {n} queries, max parameter {top} (k = {inst.k})")
