"""Count perfect matchings, face-restricted MatchSums and an apex instance."""

import random

from pdcount.apex import solve
from pdcount.brute import brute_perfmatch
from pdcount.face_matchsum import defect_spectrum, matchsum_faces
from pdcount.fkt import perfmatch_planar
from pdcount.generators import grid_graph, random_apex_instance

g = grid_graph(8, 8)
print("perfect matchings of the 8x8 grid:", perfmatch_planar(g))

h = grid_graph(4, 4)
face = next(f for f in h.faces() if f.id != h.outer_face().id)
weighted = h.with_vertex_weights([1 if v in face.vertices else 0 for v in range(h.n)])
print("MatchSum with one weighted face:", matchsum_faces(weighted, [face.id]))
print("defect spectrum:", defect_spectrum(h, [face.id]))

inst = random_apex_instance(10, 2, random.Random(1), s=2, apex_degree=3)
print("apex solver:", solve(inst), " brute force:", brute_perfmatch(inst.to_graph()))
