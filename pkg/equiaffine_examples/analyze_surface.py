#!/usr/bin/env python3
# Prints the equiaffine invariants of a surface given by three expressions.
import sys

import numpy as np

from equiaffine import analyze


# The saddle z = xy is the simplest flat, minimal surface
source = sys.argv[1] if len(sys.argv) > 1 else 'u; v; u*v'
u = np.linspace(-1, 1, 21)
v = np.linspace(-1, 1, 21)

analysis = analyze(source, u, v)
print(analysis.summary_line())
if not analysis.affine:
    # Elliptic surfaces, or coordinates that are not asymptotic
    print('No affine invariants:', analysis.skipped)
    sys.exit(4)

# Show a few samples along the diagonal
for report in analysis.reports():
    u0, v0 = report.point
    if u0 == v0 and abs(u0) <= 0.5:
        print('at ({:+.2f}, {:+.2f}): K = {:+.3e}, H = {:+.3e}, '
              'normal = ({:.4f}, {:.4f}, {:.4f})'.format(
                  u0, v0, report.K_aff, report.H_aff,
                  *report.affine_normal))
