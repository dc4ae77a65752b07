import numpy as np
from collections import defaultdict

# graded two-frequency trig polynomial algebra
# cos-poly: dict[(m1,m2)] -> coeff  (canonical: first nonzero of key > 0, or key == (0,0))
# sin-poly: same keys, sin((m1+m2 c)t); key (0,0) dropped

def canon(key):
    m1, m2 = key
    if m1 < 0 or (m1 == 0 and m2 < 0):
        return (-m1, -m2), -1.0
    return (m1, m2), 1.0

def cadd(p, key, val):
    k, s = canon(key)
    p[k] = p.get(k, 0.0) + val  # cos is even: sign ignored
    return p

def cmul(p, q):  # cos*cos -> cos
    r = {}
    for (k1, v1) in p.items():
        for (k2, v2) in q.items():
            for kk in [(k1[0]+k2[0], k1[1]+k2[1]), (k1[0]-k2[0], k1[1]-k2[1])]:
                k, _ = canon(kk)
                r[k] = r.get(k, 0.0) + 0.5*v1*v2
    return r

def smul_cos(sinp, cosp):  # sin*cos -> sin
    r = {}
    for (k1, v1) in sinp.items():
        for (k2, v2) in cosp.items():
            for kk, sgn in [((k1[0]+k2[0], k1[1]+k2[1]), 1.0), ((k1[0]-k2[0], k1[1]-k2[1]), 1.0)]:
                k, s = canon(kk)
                if k == (0,0): continue  # sin(0)=0
                r[k] = r.get(k, 0.0) + 0.5*v1*v2*s
    return r

def gmul(P, Q, nmax):  # graded multiply of lists-of-cos-polys
    R = [dict() for _ in range(nmax+1)]
    for i, p in enumerate(P):
        if p is None: continue
        for j, q in enumerate(Q):
            if q is None or i+j > nmax: continue
            m = cmul(p, q)
            for k, v in m.items():
                R[i+j][k] = R[i+j].get(k, 0.0) + v
    return R

def gadd(P, Q, scale=1.0):
    n = max(len(P), len(Q))
    R = [dict() for _ in range(n)]
    for i in range(n):
        for src in [P[i] if i < len(P) else {}, ]:
            for k, v in src.items(): R[i][k] = R[i].get(k, 0.0) + v
        if i < len(Q):
            for k, v in Q[i].items(): R[i][k] = R[i].get(k, 0.0) + scale*v
    return R

def series_solve(a, b, c, x0, y0, order):
    Q = b*np.sqrt(c)
    X = [ {(0,0): x0} ] + [dict() for _ in range(order)]
    Y = [ {(0,0): y0} ] + [dict() for _ in range(order)]
    cos_t   = {(1,0): 1.0}
    cos_1c  = {(1,1): 1.0}
    cos_ct  = {(0,1): 1.0}
    sin_t   = {(1,0): 1.0}
    sin_1c  = {(1,1): 1.0}
    sin_ct  = {(0,1): 1.0}
    for n in range(1, order+1):
        # g = G-1 graded to n-1 using X,Y known to grade n-1
        nm = n-1
        XX = gmul(X, X, nm)
        XY = gmul(X, Y, nm)
        XXY = gmul(XX, Y, nm)
        XXYY = gmul(XXY, Y, nm)
        g = [dict() for _ in range(nm+1)]
        def acc(glist, polys, shift, scale, cosf):
            # add scale * polys[i] * cosf at grade i+shift
            for i, p in enumerate(polys):
                gr = i + shift
                if gr > nm: continue
                m = cmul(p, cosf) if cosf is not None else dict(p)
                for k, v in m.items():
                    glist[gr][k] = glist[gr].get(k, 0.0) + scale*v
        acc(g, X, 1, 2*a, cos_t)          # 2 a x cos t
        acc(g, XY, 1, 2*Q, cos_1c)        # 2 b√c x y cos (1+c)t
        acc(g, XX, 2, a*a, None)          # a² x²
        acc(g, XXY, 2, 2*a*Q, cos_ct)     # 2 a b√c x² y cos ct
        acc(g, XXYY, 2, Q*Q, None)        # b²c x² y²
        # 1/G = sum (-1)^k g^k truncated to grade n-1
        invG = [dict() for _ in range(nm+1)]
        invG[0][(0,0)] = 1.0
        gk = [dict() for _ in range(nm+1)]; gk[0][(0,0)] = 1.0  # g^0
        for k in range(1, nm+1):
            gk = gmul(gk, g, nm)
            sgn = -1.0 if k % 2 == 1 else 1.0
            for i in range(nm+1):
                for kk, v in gk[i].items():
                    invG[i][kk] = invG[i].get(kk, 0.0) + sgn*v
        # RHS_x = (-a sin t - Q Y sin(1+c)t) * invG  -> grade n sin-poly
        rhs_x = {}
        # term -a sin t (grade 1) * invG grade n-1
        for k, v in smul_cos(sin_t, invG[n-1]).items():
            rhs_x[k] = rhs_x.get(k, 0.0) - a*v
        # term -Q y_k sin(1+c)t * invG grade n-1-k
        for kgr in range(0, n):
            if n-1-kgr < 0: continue
            yk = Y[kgr]
            if not yk: continue
            s1 = smul_cos(sin_1c, yk)   # sin(1+c)t * cos-poly -> sin-poly
            s2 = smul_cos(s1, invG[n-1-kgr])
            for k, v in s2.items():
                rhs_x[k] = rhs_x.get(k, 0.0) - Q*v
        # RHS_y = (-Q X sin(1+c)t - aQ X² sin ct) * invG -> grade n
        rhs_y = {}
        for kgr in range(0, n):
            xk = X[kgr]
            if xk and n-1-kgr >= 0:
                s1 = smul_cos(sin_1c, xk)
                s2 = smul_cos(s1, invG[n-1-kgr])
                for k, v in s2.items():
                    rhs_y[k] = rhs_y.get(k, 0.0) - Q*v
        XX2 = gmul(X, X, n-2) if n >= 2 else []
        for kgr in range(0, max(0, n-1)):
            if kgr < len(XX2) and XX2[kgr] and n-2-kgr >= 0:
                s1 = smul_cos(sin_ct, XX2[kgr])
                s2 = smul_cos(s1, invG[n-2-kgr])
                for k, v in s2.items():
                    rhs_y[k] = rhs_y.get(k, 0.0) - a*Q*v
        # integrate sin -> cos ; fix const so x_n(0)=0
        for rhs, S in [(rhs_x, X), (rhs_y, Y)]:
            newp = {}
            const = 0.0
            for (m1, m2), v in rhs.items():
                w = m1 + m2*c
                if abs(w) <= 1e-12:
                    continue  # resonance: term vanishes
                newp[(m1, m2)] = newp.get((m1, m2), 0.0) - v/w
                const += v/w
            newp[(0,0)] = newp.get((0,0), 0.0) + const
            S[n] = newp
    return X, Y

a=b=0.3; c=np.sqrt(2)/2; Q=b*np.sqrt(c); x0, y0 = 0.7, -0.4
X, Y = series_solve(a, b, c, x0, y0, 2)
print("x1:", sorted(X[1].items()))
print("expect x1: const", -(a + Q*y0/(1+c)), " (1,0):", a, " (1,1):", Q*y0/(1+c))
print("y1:", sorted(Y[1].items()))
print("expect y1: (1,1):", Q*x0/(1+c), "const:", -Q*x0/(1+c))
# second order vs Eqs (21),(22)
x2_expect = {
    (2,0): -a*a*x0/2,
    (1,1): -b*b*c*x0/(1+c)**2,
    (2,2): -(b*b*c*x0/(2*(1+c)))*(y0*y0 - 1/(2*(1+c))),
    (2,1): -2*a*Q*x0*y0/(2+c),
}
x2_expect[(0,0)] = -sum(x2_expect.values())
y2_expect = {
    (1,1): -(a*Q/(1+c) + b*b*c*y0/(1+c)**2),
    (2,2): -(b*b*c*y0/(2*(1+c)))*(x0*x0 - 1/(2*(1+c))),
    (0,1): a*b/(2*np.sqrt(c)),
    (2,1): -(a*Q/(2+c))*(x0*x0 - 0.5),
}
y2_expect[(0,0)] = -sum(y2_expect.values())
for got, exp, name in [(X[2], x2_expect, 'x2'), (Y[2], y2_expect, 'y2')]:
    keys = set(got) | set(exp)
    worst = max(abs(got.get(k,0.0)-exp.get(k,0.0)) for k in keys)
    print(f"{name} max coeff err vs printed eqs: {worst:.2e}  keys got={sorted(got)} exp={sorted(exp)}")

# residual scaling: order 2, amplitudes 0.1 vs 0.2
def eval_series(S, t, c):
    tot = 0.0
    for p in S:
        for (m1, m2), v in p.items():
            tot += v*np.cos((m1+m2*c)*t)
    return tot

def eval_series_deriv(S, t, c):
    tot = 0.0
    for p in S:
        for (m1, m2), v in p.items():
            w = m1+m2*c
            tot += -v*w*np.sin(w*t)
    return tot

def residual(a, b, c, x0, y0, order, ts):
    Q=b*np.sqrt(c)
    X, Y = series_solve(a, b, c, x0, y0, order)
    worst=0.0
    for t in ts:
        x=eval_series(X,t,c); y=eval_series(Y,t,c)
        G=(1+2*a*x*np.cos(t)+2*Q*x*y*np.cos((1+c)*t)+a*a*x*x+2*a*Q*x*x*y*np.cos(c*t)+Q*Q*x*x*y*y)
        vx=-(a*np.sin(t)+Q*y*np.sin((1+c)*t))/G
        vy=-(Q*x*(a*x*np.sin(c*t)+np.sin((1+c)*t)))/G
        r=np.hypot(eval_series_deriv(X,t,c)-vx, eval_series_deriv(Y,t,c)-vy)
        worst=max(worst,r)
    return worst

ts=np.linspace(0,50,501)
r1=residual(0.1,0.1,c,1.0,0.0,2,ts)
r2=residual(0.2,0.2,c,1.0,0.0,2,ts)
print(f"order-2 residual a=b=0.1: {r1:.3e}, a=b=0.2: {r2:.3e}, ratio {r2/r1:.2f}")
r4=residual(0.5,0.5,c,0.0,0.0,4,ts)
r10=residual(0.5,0.5,c,0.0,0.0,10,ts)
print(f"a=b=0.5 x0=y0=0: order-4 residual {r4:.3e}  order-10 {r10:.3e}")
import time
t0=time.time(); series_solve(0.5,0.5,c,0.5,0.5,12); print("order-12 build time:", time.time()-t0)
