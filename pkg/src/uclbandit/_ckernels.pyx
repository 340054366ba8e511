# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernels; see _kernels_py.py for the reference version."""

from libc.math cimport erfc, exp, log, sqrt, fabs, INFINITY
from libc.stdlib cimport malloc, free


cdef double INV_SQRT_2PI = 0.398942280401432677939946059934
cdef double SQRT2 = 1.41421356237309504880168872421

cdef double[8] A = [3.3871328727963666080e0, 1.3314166789178437745e2,
                    1.9715909503065514427e3, 1.3731693765509461125e4,
                    4.5921953931549871457e4, 6.7265770927008700853e4,
                    3.3430575583588128105e4, 2.5090809287301226727e3]
cdef double[8] B = [1.0, 4.2313330701600911252e1,
                    6.8718700749205790830e2, 5.3941960214247511077e3,
                    2.1213794301586595867e4, 3.9307895800092710610e4,
                    2.8729085735721942674e4, 5.2264952788528545610e3]
cdef double[8] C = [1.42343711074968357734e0, 4.63033784615654529590e0,
                    5.76949722146069140550e0, 3.64784832476320460504e0,
                    1.27045825245236838258e0, 2.41780725177450611770e-1,
                    2.27238449892691845833e-2, 7.74545014278341407640e-4]
cdef double[8] D = [1.0, 2.05319162663775882187e0,
                    1.67638483018380384940e0, 6.89767334985100004550e-1,
                    1.48103976427480074590e-1, 1.51986665636164571966e-2,
                    5.47593808499534494600e-4, 1.05075007164441684324e-9]
cdef double[8] E = [6.65790464350110377720e0, 5.46378491116411436990e0,
                    1.78482653991729133580e0, 2.96560571828504891230e-1,
                    2.65321895265761230930e-2, 1.24266094738807843860e-3,
                    2.71155556874348757815e-5, 2.01033439929228813265e-7]
cdef double[8] F = [1.0, 5.99832206555887937690e-1,
                    1.36929880922735805310e-1, 1.48753612908506148525e-2,
                    7.86869131145613259100e-4, 1.84631831751005468180e-5,
                    1.42151175831644588870e-7, 2.04426310338993978564e-15]

cdef enum:
    DETERMINISTIC = 0
    STOCHASTIC = 1
    UCB1 = 2

cdef enum:
    COOLING = 0
    CONSTANT = 1
    ARGMAX = 2


cdef inline double _poly(double* c, double x) noexcept nogil:
    cdef double acc = 0.0
    cdef int i
    for i in range(7, -1, -1):
        acc = acc * x + c[i]
    return acc


cdef double _lower_tail(double q) noexcept nogil:
    cdef double d = q - 0.5, r, x, dens
    if fabs(d) <= 0.425:
        r = 0.180625 - d * d
        x = d * _poly(A, r) / _poly(B, r)
    else:
        r = sqrt(-log(q))
        if r <= 5.0:
            r -= 1.6
            x = -_poly(C, r) / _poly(D, r)
        else:
            r -= 5.0
            x = -_poly(E, r) / _poly(F, r)
    dens = INV_SQRT_2PI * exp(-0.5 * x * x)
    if dens > 0.0:
        x -= (0.5 * erfc(-x / SQRT2) - q) / dens
    return x


cdef inline double _upper_q(double alpha) noexcept nogil:
    if alpha <= 0.5:
        return -_lower_tail(alpha)
    return _lower_tail(1.0 - alpha)


def upper_quantile(double alpha):
    return _upper_q(alpha)


cdef inline double _alpha(double K, long long t, int exponent) noexcept nogil:
    if exponent == 1:
        return 1.0 / (K * <double>t)
    return 1.0 / (K * <double>(t * t))


cdef inline int _bit_length(long long v) noexcept nogil:
    cdef int k = 0
    while v > 0:
        v >>= 1
        k += 1
    return k


cdef void _fill_ucl(double* q, int n, long long* counts, double* emp, const double* mu0,
                    double delta2, double sigma_s2, double sigma0_sq, double z) noexcept nogil:
    cdef int i
    cdef double nn, mean
    for i in range(n):
        if counts[i] == 0:
            if sigma0_sq == INFINITY:
                q[i] = INFINITY
            else:
                q[i] = mu0[i] + sqrt(sigma0_sq) * z
        else:
            nn = <double>counts[i]
            mean = (delta2 * mu0[i] + nn * emp[i]) / (delta2 + nn)
            q[i] = mean + sqrt(sigma_s2 / (delta2 + nn)) * z


cdef inline int _argmax(double* q, int n) noexcept nogil:
    cdef int i, best = 0
    for i in range(1, n):
        if q[i] > q[best]:
            best = i
    return best


cdef int _sample(double* w, int n, double u) noexcept nogil:
    cdef double total = 0.0, target, acc = 0.0
    cdef int i, last = 0
    for i in range(n):
        total += w[i]
    target = u * total
    for i in range(n):
        if w[i] > 0.0:
            last = i
            acc += w[i]
            if acc > target:
                return i
    return last


cdef int _softmax_pick(double* q, double* w, int n, long long t, int temp_kind,
                       double temp_value, double u) noexcept nogil:
    cdef int i, j, n_inf = 0, best
    cdef double gap, d, temp, qmax
    for i in range(n):
        if q[i] == INFINITY:
            n_inf += 1
    if n_inf > 0:
        for i in range(n):
            w[i] = 1.0 if q[i] == INFINITY else 0.0
        return _sample(w, n, u)
    if n == 1:
        return 0
    best = _argmax(q, n)
    if temp_kind == ARGMAX:
        return best
    if temp_kind == COOLING:
        if t <= 1:
            for i in range(n):
                w[i] = 1.0
            return _sample(w, n, u)
        gap = INFINITY
        for i in range(n):
            for j in range(i + 1, n):
                d = fabs(q[i] - q[j])
                if d < gap:
                    gap = d
        temp = gap / (2.0 * log(<double>t))
    else:
        temp = temp_value
    if temp == 0.0:
        return best
    qmax = q[best]
    for i in range(n):
        w[i] = exp((q[i] - qmax) / temp)
    return _sample(w, n, u)


cdef inline void _observe(long long* counts, double* emp, int arm, double reward) noexcept nogil:
    counts[arm] += 1
    emp[arm] += (reward - emp[arm]) / <double>counts[arm]


cdef struct Work:
    long long* counts
    double* emp
    double* q
    double* w


cdef int _alloc(Work* wk, int n) noexcept nogil:
    cdef int i
    wk.counts = <long long*>malloc(n * sizeof(long long))
    wk.emp = <double*>malloc(n * sizeof(double))
    wk.q = <double*>malloc(n * sizeof(double))
    wk.w = <double*>malloc(n * sizeof(double))
    if wk.counts == NULL or wk.emp == NULL or wk.q == NULL or wk.w == NULL:
        return -1
    for i in range(n):
        wk.counts[i] = 0
        wk.emp[i] = 0.0
    return 0


cdef void _release(Work* wk) noexcept nogil:
    free(wk.counts)
    free(wk.emp)
    free(wk.q)
    free(wk.w)


cdef inline double _delta2(double sigma_s2, double sigma0_sq) noexcept nogil:
    return 0.0 if sigma0_sq == INFINITY else sigma_s2 / sigma0_sq


def run_index_policy(int policy, const double[::1] means, const double[::1] noise, const double[::1] uniforms,
                     const double[::1] mu0, double sigma0_sq, double sigma_s2, double K, int exponent,
                     int temp_kind, double temp_value, long long[::1] arms_out):
    cdef int n = means.shape[0], i, arm
    cdef long long horizon = arms_out.shape[0], t
    cdef double delta2 = _delta2(sigma_s2, sigma0_sq), z, lt, reward
    cdef Work wk
    if _alloc(&wk, n) != 0:
        _release(&wk)
        raise MemoryError()
    with nogil:
        for t in range(1, horizon + 1):
            if policy == UCB1:
                if t <= n:
                    arm = <int>(t - 1)
                else:
                    lt = log(<double>t)
                    for i in range(n):
                        wk.q[i] = wk.emp[i] + sqrt(2.0 * lt / <double>wk.counts[i])
                    arm = _argmax(wk.q, n)
            else:
                z = _upper_q(_alpha(K, t, exponent))
                _fill_ucl(wk.q, n, wk.counts, wk.emp, &mu0[0], delta2, sigma_s2, sigma0_sq, z)
                if policy == DETERMINISTIC:
                    arm = _argmax(wk.q, n)
                else:
                    arm = _softmax_pick(wk.q, wk.w, n, t, temp_kind, temp_value, uniforms[t - 1])
            reward = means[arm] + noise[t - 1]
            _observe(wk.counts, wk.emp, arm, reward)
            arms_out[t - 1] = arm
    _release(&wk)


def run_block(const double[::1] means, const double[::1] noise, const double[::1] mu0, double sigma0_sq,
              double sigma_s2, double K, int exponent, long long[::1] arms_out):
    cdef int n = means.shape[0], k, arm
    cdef long long horizon = arms_out.shape[0], t = 1, frame_start, start, length, s
    cdef double delta2 = _delta2(sigma_s2, sigma0_sq), z, reward
    cdef Work wk
    if _alloc(&wk, n) != 0:
        _release(&wk)
        raise MemoryError()
    with nogil:
        while t <= horizon:
            k = _bit_length(t)
            frame_start = (<long long>1) << (k - 1)
            start = frame_start + ((t - frame_start) // k) * k
            length = min(<long long>k, ((<long long>1) << k) - start)
            z = _upper_q(_alpha(K, start, exponent))
            _fill_ucl(wk.q, n, wk.counts, wk.emp, &mu0[0], delta2, sigma_s2, sigma0_sq, z)
            arm = _argmax(wk.q, n)
            for s in range(length):
                if t > horizon:
                    break
                reward = means[arm] + noise[t - 1]
                _observe(wk.counts, wk.emp, arm, reward)
                arms_out[t - 1] = arm
                t += 1
    _release(&wk)


def run_graphical(const double[::1] means, const double[::1] noise, const double[::1] mu0, double sigma0_sq,
                  double sigma_s2, double K, int exponent, const long long[::1] offsets,
                  const long long[::1] nodes, int start_arm, long long[::1] arms_out,
                  signed char[::1] goal_out):
    cdef int n = means.shape[0], k, goal, arm, current = start_arm
    cdef long long horizon = arms_out.shape[0], t = 1, goals = 0, g
    cdef long long frame_start, start, length, s, p, pair
    cdef double delta2 = _delta2(sigma_s2, sigma0_sq), z, reward
    cdef const long long* nodes_p = &nodes[0] if nodes.shape[0] > 0 else NULL
    cdef Work wk
    if _alloc(&wk, n) != 0:
        _release(&wk)
        raise MemoryError()
    with nogil:
        while t <= horizon:
            g = goals + 1
            k = _bit_length(g)
            frame_start = (<long long>1) << (k - 1)
            start = frame_start + ((g - frame_start) // k) * k
            length = min(<long long>k, ((<long long>1) << k) - start)
            z = _upper_q(_alpha(K, t, exponent))
            _fill_ucl(wk.q, n, wk.counts, wk.emp, &mu0[0], delta2, sigma_s2, sigma0_sq, z)
            goal = _argmax(wk.q, n)
            pair = <long long>current * n + goal
            for p in range(offsets[pair], offsets[pair + 1]):
                if t > horizon:
                    break
                arm = <int>nodes_p[p]
                reward = means[arm] + noise[t - 1]
                _observe(wk.counts, wk.emp, arm, reward)
                arms_out[t - 1] = arm
                goal_out[t - 1] = 0
                t += 1
            for s in range(length):
                if t > horizon:
                    break
                reward = means[goal] + noise[t - 1]
                _observe(wk.counts, wk.emp, goal, reward)
                arms_out[t - 1] = goal
                goal_out[t - 1] = 1
                goals += 1
                t += 1
            current = goal
    _release(&wk)
