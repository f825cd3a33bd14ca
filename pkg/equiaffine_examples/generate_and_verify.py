#!/usr/bin/env python3
# Generates a flat, minimal surface from l(v) and f(v), checks it and
# writes it as a mesh.
# Import modules to access the environment and the command line
import logging
import os
import sys

# Import the generator and the checks
from equiaffine import GeneratorInput, generate, run_verification
from equiaffine.extensions import write_grid, write_obj


logging.basicConfig(
    format='[%(levelname) 5s/%(asctime)s] %(name)s: %(message)s',
    level=logging.INFO)

# Both functions may only depend on v
ell = os.environ.get('EQ_ELL', '9')
f = os.environ.get('EQ_F', '32*sin(8*v)')
out = sys.argv[1] if len(sys.argv) > 1 else 'surface'

# A fine grid along v keeps the finite differences of the checks accurate
params = GeneratorInput(ell, f, u_range=(-1, 1), v_range=(-0.25, 0.25),
                        nu=9, nv=401)
grid = generate(params)

# The normal form checks need both functions and the stored frames
report = run_verification(grid, ell=ell, f=f, tol=1e-4)
print(report.format_table())

write_grid(grid, out + '.json')
write_obj(grid, out + '.obj')
print('Wrote {0}.json and {0}.obj'.format(out))
sys.exit(0 if report.passed else 1)
