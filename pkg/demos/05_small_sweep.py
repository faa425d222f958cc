"""
A desk-scale sweep and its surfaces
===================================

The full protocol draws 30 reservoirs for each of 10 sizes and evaluates
10 scaling factors spread over each reservoir's own ITUC: 3000 trials.
Here we run a reduced plan and print the accuracy surface. The same plan
can be run from the command line with ``esn-ituc sweep``.
"""
import numpy as np

from esn_ituc.experiment import SweepPlan, aggregate, gnuplot_matrix_text, run_sweep

plan = SweepPlan.published("mackey_glass", sizes=(20, 50), k_alphas=5, n_trials=5)
print(f"{plan.total_trials} trials; the published plan has "
      f"{SweepPlan.published('mackey_glass').total_trials}")

records = run_sweep(plan, progress=lambda n, total: print(f"  cell {n}/{total}", end="\r"))
nrmse_grid, mmds_grid = aggregate(records)

np.set_printoptions(precision=4, suppress=True)
print("\nmean free-run NRMSE, rows n_s, columns alpha_index (lower -> upper bound)")
print(nrmse_grid.mean)
print("mean MMDS")
print(mmds_grid.mean)

# gnuplot: splot 'surface_nrmse.txt' nonuniform matrix with pm3d
print("\n" + gnuplot_matrix_text(nrmse_grid))
