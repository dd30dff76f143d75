"""Poke at the regressor itself: loss shape, exact gradients, Adam updates.

Run:  python demos/04_network_and_gradients.py
"""

import math

import numpy as np

from vocabtrend import (
    AdamState,
    Hyperparams,
    adam_step,
    backward,
    forward,
    grad_check,
    init_params,
    logcosh_loss,
)

rng = np.random.default_rng(0)

# 1. The loss is quadratic near zero and linear in the tails, so single
#    wild targets cannot dominate a batch.
for d in (1e-3, 0.5, 1.0, 5.0, 50.0):
    loss = logcosh_loss(np.array([d]), np.array([0.0]))
    print(f"  lncosh({d:>6}) = {loss:12.6f}   (d^2/2 = {d * d / 2:10.6f}, |d|-ln2 = {d - math.log(2):10.6f})")

# 2. Backpropagation through time is verified against central differences.
hyper = Hyperparams(hidden_size=4, dense1=4, dense2=3, dropout=0.0)
params = init_params(hyper, rng)
batch = rng.uniform(0, 5, (4, 3))
target = rng.uniform(0, 5, 4)
print(f"\ngradient check, worst relative error: {grad_check(params, batch, target):.2e}")

# 3. A few hundred Adam steps fit a constant series. Far from the target
#    the loss is linear, so each step moves the prediction by about the
#    learning rate; 0.05 crosses the gap quickly.
series = np.full((16, 4), 9.0)
targets = np.full(16, 9.0)
state = AdamState.zeros_like(params)
fit_hyper = Hyperparams(hidden_size=4, dense1=4, dense2=3, dropout=0.0, learning_rate=0.05)
for step in range(500):
    pred, cache = forward(params, series, training=True, dropout=0.0, rng=rng)
    grads = backward(params, cache, series, targets)
    params, state = adam_step(params, grads, state, fit_hyper)
    if step % 125 == 0:
        print(f"  step {step:3d}: loss {logcosh_loss(pred, targets):.5f}")

pred, _ = forward(params, series)
print(f"prediction after fitting the constant 9.0 series: {pred[0]:.3f}")
