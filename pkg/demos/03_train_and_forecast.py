"""
Training an ESN inside the ITUC and forecasting Mackey-Glass
============================================================

One reservoir, two scaling factors: the lower and the upper end of its
ITUC. We score one-step (teacher-forced) and 84-step free-run forecasts.
"""
import numpy as np

from esn_ituc import esn, timeseries
from esn_ituc.esp import compute_bounds

n_train, n_test = 10000, 2000
data, _ = timeseries.normalize_01(timeseries.gen_mackey_glass(n_train + n_test))
u = data.values

config = esn.ReservoirConfig(n_s=100, gamma=1e-4, washout=100, seed=3)
base, w0 = esn.init_model(config)
bounds = compute_bounds(w0)
print(f"ITUC = [{bounds.u_low:.5f}, {bounds.u_high:.5f}]")

for label, alpha in (("lower", bounds.u_low), ("upper", bounds.u_high)):
    model = base.with_alpha(alpha)
    esn.train(model, u[: n_train - 1], u[1:n_train])
    # teacher forcing: the reservoir sees the true series, one step ahead
    tf = esn.predict_teacher_forced(model, u[n_train - 101: n_train + n_test - 1])
    # free run: predictions are fed back as the next input
    fr = esn.predict_free_run(model, u[:n_train], 84)
    print(f"{label} bound alpha={alpha:.5f}: "
          f"teacher-forced NRMSE={esn.nrmse(tf, u[n_train:]):.2e}, "
          f"free-run(84) NRMSE={esn.nrmse(fr, u[n_train:n_train + 84]):.3f}")

# %% the trained model is plain JSON
esn.save_model(model, "mg_model.json")
again = esn.load_model("mg_model.json")
print("reloaded model predicts identically:",
      np.array_equal(esn.predict_free_run(again, u[:n_train], 84).values, fr.values))
