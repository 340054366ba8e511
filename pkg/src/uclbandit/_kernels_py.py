"""Pure-Python simulation kernels for diagonal (per-arm) beliefs.

Line-for-line twin of ``_ckernels.pyx``; used when the extension is not built.
All random input is pre-drawn: ``noise[t-1]`` is added to the chosen arm's
mean at step ``t`` and ``uniforms[t-1]`` drives the stochastic choice.
"""

import math

from .normal_quantile import upper_quantile

DETERMINISTIC, STOCHASTIC, UCB1 = 0, 1, 2
COOLING, CONSTANT, ARGMAX = 0, 1, 2

INF = math.inf


def _alpha(K, t, exponent):
    return 1.0 / (K * float(t if exponent == 1 else t * t))


def _fill_ucl(q, counts, emp, mu0, delta2, sigma_s2, sigma0_sq, z):
    for i in range(len(q)):
        n = counts[i]
        if n == 0:
            # prior values are kept verbatim, as the belief object does
            q[i] = INF if sigma0_sq == INF else mu0[i] + math.sqrt(sigma0_sq) * z
        else:
            mean = (delta2 * mu0[i] + n * emp[i]) / (delta2 + n)
            q[i] = mean + math.sqrt(sigma_s2 / (delta2 + n)) * z


def _argmax(q):
    best = 0
    for i in range(1, len(q)):
        if q[i] > q[best]:
            best = i
    return best


def _softmax_pick(q, t, temp_kind, temp_value, u):
    n = len(q)
    w = [0.0] * n
    n_inf = 0
    for i in range(n):
        if q[i] == INF:
            n_inf += 1
    if n_inf > 0:
        for i in range(n):
            w[i] = 1.0 if q[i] == INF else 0.0
    elif n == 1:
        return 0
    else:
        best = _argmax(q)
        if temp_kind == ARGMAX:
            return best
        if temp_kind == COOLING:
            if t <= 1:
                for i in range(n):
                    w[i] = 1.0
                return _sample(w, u)
            gap = INF
            for i in range(n):
                for j in range(i + 1, n):
                    d = abs(q[i] - q[j])
                    if d < gap:
                        gap = d
            temp = gap / (2.0 * math.log(t))
        else:
            temp = temp_value
        if temp == 0.0:
            return best
        qmax = q[best]
        for i in range(n):
            w[i] = math.exp((q[i] - qmax) / temp)
    return _sample(w, u)


def _sample(w, u):
    total = 0.0
    for x in w:
        total += x
    target = u * total
    acc = 0.0
    last = 0
    for i in range(len(w)):
        if w[i] > 0.0:
            last = i
            acc += w[i]
            if acc > target:
                return i
    return last


def run_index_policy(policy, means, noise, uniforms, mu0, sigma0_sq, sigma_s2, K, exponent,
                     temp_kind, temp_value, arms_out):
    """Deterministic UCL, stochastic UCL, or UCB1 over ``len(arms_out)`` steps."""
    n_arms = len(means)
    horizon = len(arms_out)
    delta2 = 0.0 if sigma0_sq == INF else sigma_s2 / sigma0_sq
    counts = [0] * n_arms
    emp = [0.0] * n_arms
    q = [0.0] * n_arms
    means = [float(m) for m in means]
    mu0 = [float(m) for m in mu0]
    for t in range(1, horizon + 1):
        if policy == UCB1:
            if t <= n_arms:
                arm = t - 1
            else:
                lt = math.log(t)
                for i in range(n_arms):
                    q[i] = emp[i] + math.sqrt(2.0 * lt / counts[i])
                arm = _argmax(q)
        else:
            z = upper_quantile(_alpha(K, t, exponent))
            _fill_ucl(q, counts, emp, mu0, delta2, sigma_s2, sigma0_sq, z)
            if policy == DETERMINISTIC:
                arm = _argmax(q)
            else:
                arm = _softmax_pick(q, t, temp_kind, temp_value, float(uniforms[t - 1]))
        reward = means[arm] + float(noise[t - 1])
        counts[arm] += 1
        emp[arm] += (reward - emp[arm]) / counts[arm]
        arms_out[t - 1] = arm


def run_block(means, noise, mu0, sigma0_sq, sigma_s2, K, exponent, arms_out):
    n_arms = len(means)
    horizon = len(arms_out)
    delta2 = 0.0 if sigma0_sq == INF else sigma_s2 / sigma0_sq
    counts = [0] * n_arms
    emp = [0.0] * n_arms
    q = [0.0] * n_arms
    means = [float(m) for m in means]
    mu0 = [float(m) for m in mu0]
    t = 1
    while t <= horizon:
        k = t.bit_length()
        frame_start = 1 << (k - 1)
        start = frame_start + ((t - frame_start) // k) * k
        length = min(k, (1 << k) - start)
        z = upper_quantile(_alpha(K, start, exponent))
        _fill_ucl(q, counts, emp, mu0, delta2, sigma_s2, sigma0_sq, z)
        arm = _argmax(q)
        for _ in range(length):
            if t > horizon:
                break
            reward = means[arm] + float(noise[t - 1])
            counts[arm] += 1
            emp[arm] += (reward - emp[arm]) / counts[arm]
            arms_out[t - 1] = arm
            t += 1


def run_graphical(means, noise, mu0, sigma0_sq, sigma_s2, K, exponent, offsets, nodes,
                  start_arm, arms_out, goal_out):
    n_arms = len(means)
    horizon = len(arms_out)
    delta2 = 0.0 if sigma0_sq == INF else sigma_s2 / sigma0_sq
    counts = [0] * n_arms
    emp = [0.0] * n_arms
    q = [0.0] * n_arms
    means = [float(m) for m in means]
    mu0 = [float(m) for m in mu0]
    current = start_arm
    goals = 0
    t = 1
    while t <= horizon:
        g = goals + 1
        k = g.bit_length()
        frame_start = 1 << (k - 1)
        start = frame_start + ((g - frame_start) // k) * k
        length = min(k, (1 << k) - start)
        z = upper_quantile(_alpha(K, t, exponent))
        _fill_ucl(q, counts, emp, mu0, delta2, sigma_s2, sigma0_sq, z)
        goal = _argmax(q)
        pair = current * n_arms + goal
        for p in range(offsets[pair], offsets[pair + 1]):
            if t > horizon:
                break
            arm = int(nodes[p])
            reward = means[arm] + float(noise[t - 1])
            counts[arm] += 1
            emp[arm] += (reward - emp[arm]) / counts[arm]
            arms_out[t - 1] = arm
            goal_out[t - 1] = 0
            t += 1
        for _ in range(length):
            if t > horizon:
                break
            reward = means[goal] + float(noise[t - 1])
            counts[goal] += 1
            emp[goal] += (reward - emp[goal]) / counts[goal]
            arms_out[t - 1] = goal
            goal_out[t - 1] = 1
            goals += 1
            t += 1
        current = goal
