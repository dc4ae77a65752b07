import numpy as np

a = 1.0; b = 1.0; c = np.sqrt(2.0)/2.0
Q = b*np.sqrt(c)

def nodal(t):
    s1c = np.sin((1+c)*t); sc = np.sin(c*t); st = np.sin(t)
    x0 = -s1c/(a*sc)
    y0 = -a*st/(Q*s1c)
    # derivatives
    x0d = -((1+c)*np.cos((1+c)*t)*sc - c*s1c*np.cos(c*t))/(a*sc**2)
    y0d = -(a/Q)*(np.cos(t)*s1c - st*(1+c)*np.cos((1+c)*t))/s1c**2
    return x0, y0, x0d, y0d

def f3_closed(t0, sign):
    # sign=+1 -> paper's printed (1+K) form, sign=-1 -> derived (1-K) on the x0*x0dot term
    x0, y0, x0d, y0d = nodal(t0)
    s = np.sin((1+c)*t0); co = np.cos((1+c)*t0)
    K = b*b*c*x0**4
    pref = (1+K)/(4*Q*x0**4*s)
    t1 = x0*x0d * (1 + sign*K)/(1+K)   # fold sign into first term
    t2 = x0d*y0d*(K-1)/(Q*s)
    t3 = -x0**2*(x0d**2-y0d**2)*(co/s)
    return pref*(t1*(1+K) + t2 + t3) if False else ((1+K)/(4*Q*x0**4*s))*( x0*x0d*((1+sign*K)/(1+K)) + t2 + t3 )

def f3_closed_paper(t0):
    x0, y0, x0d, y0d = nodal(t0)
    s = np.sin((1+c)*t0); co = np.cos((1+c)*t0)
    K = b*b*c*x0**4
    return ((1+K)/(4*Q*x0**4*s))*( x0*x0d + x0d*y0d*(K-1)/(Q*s) - x0**2*(x0d**2-y0d**2)*(co/s) )

def f3_closed_derived(t0):
    x0, y0, x0d, y0d = nodal(t0)
    s = np.sin((1+c)*t0); co = np.cos((1+c)*t0)
    K = b*b*c*x0**4
    return (1.0/(4*Q*s*x0**4))*( x0*x0d*(1-K) + x0d*y0d*(K*K-1)/(Q*s) - x0**2*(x0d**2-y0d**2)*(co/s)*(1+K) )

def f_quad(t0, n=4096):
    x0, y0, x0d, y0d = nodal(t0)
    s = np.sin((1+c)*t0); co = np.cos((1+c)*t0)
    phi = np.arange(n)*2*np.pi/n
    cph = np.cos(phi); sph = np.sin(phi)
    A = a*Q*cph**2*sph*np.sin(c*t0)
    B = Q*s
    C = a*Q*cph**3*np.sin(c*t0)
    g2 = cph**2/x0**2 - 2*Q*sph*cph*co + b*b*c*x0**2*sph**2
    g3 = -(2*Q/x0)*co*cph**2*sph + 2*b*b*c*x0*cph*sph**2
    f2 = (1/B)*(-A - x0d*g2*cph - y0d*g2*sph)
    f3 = (1/B)*(-A - x0d*g2*cph - y0d*g2*sph)*( C/B + y0d*(g2/B)*cph - x0d*(g2/B)*sph ) \
         + (1/B)*(-x0d*g3*cph - y0d*g3*sph)
    return f2.mean(), f3.mean()

rng = np.random.default_rng(0)
ts = rng.uniform(1, 1000, 40)
worst_p = 0; worst_d = 0; worst_f2 = 0
for t0 in ts:
    s1c = np.sin((1+c)*t0); sc = np.sin(c*t0)
    if abs(s1c) < 1e-3 or abs(sc) < 1e-3: continue
    m2, m3 = f_quad(t0)
    fp = f3_closed_paper(t0); fd = f3_closed_derived(t0)
    worst_f2 = max(worst_f2, abs(m2))
    worst_p = max(worst_p, abs(fp-m3)/abs(m3))
    worst_d = max(worst_d, abs(fd-m3)/abs(m3))
print("max |<f2>| =", worst_f2)
print("max rel err closed(paper 1+K) vs quad:", worst_p)
print("max rel err closed(derived 1-K) vs quad:", worst_d)

# zeros of f3 (derived form) in [175, 176.5] and [176.5, 177]
for (lo, hi) in [(175,176.5),(176.5,177.0),(175,177)]:
    tt = np.linspace(lo, hi, 30001)
    ok = (np.abs(np.sin((1+c)*tt))>1e-6)&(np.abs(np.sin(c*tt))>1e-6)
    vals = np.array([f3_closed_derived(t) for t in tt])
    sgn = np.sign(vals)
    zc = np.where((sgn[:-1]*sgn[1:]<0)&ok[:-1]&ok[1:])[0]
    roots=[]
    for i in zc:
        a_,b_ = tt[i], tt[i+1]
        for _ in range(60):
            m=(a_+b_)/2
            if f3_closed_derived(a_)*f3_closed_derived(m)<=0: b_=m
            else: a_=m
        roots.append((a_+b_)/2)
    print(f"f3 zeros (derived) in [{lo},{hi}]:", [f"{r:.6f}" for r in roots])

tt = np.linspace(175, 176.5, 30001)
vals_p = np.array([f3_closed_paper(t) for t in tt])
sgn = np.sign(vals_p)
zc = np.where(sgn[:-1]*sgn[1:]<0)[0]
print("paper-form zero crossings in [175,176.5]:", len(zc), [f"{tt[i]:.4f}" for i in zc])

# collisions
k1 = int(np.ceil(174*(1+c)/np.pi)); k2 = int(np.floor(177*(1+c)/np.pi))
print("collisions in [174,177]:", [k*np.pi/(1+c) for k in range(k1,k2+1)])

# node character at hopf-test times: attractor iff f3*sign(sin th)<0
for t0 in [175.70,175.76,175.775,175.78,175.80]:
    f3v=f3_closed_derived(t0); s=np.sign(np.sin((1+c)*t0))
    print(f"t0={t0}: f3={f3v:+.5f} sign(sin)={s:+.0f} -> node {'attractor' if f3v*s<0 else 'repellor'}")
