import numpy as np

a = 1.0; b = 1.0; c = np.sqrt(2.0)/2.0
Q = b*np.sqrt(c)

def nodal(t):
    s1c = np.sin((1+c)*t); sc = np.sin(c*t); st = np.sin(t)
    x0 = -s1c/(a*sc)
    y0 = -a*st/(Q*s1c)
    x0d = -((1+c)*np.cos((1+c)*t)*sc - c*s1c*np.cos(c*t))/(a*sc**2)
    y0d = -(a/Q)*(np.cos(t)*s1c - st*(1+c)*np.cos((1+c)*t))/s1c**2
    return x0, y0, x0d, y0d

def mk(t0):
    x0,y0,x0d,y0d = nodal(t0)
    s = np.sin((1+c)*t0); sc=np.sin(c*t0); co=np.cos((1+c)*t0)
    def G(u,v):
        return (u*u/x0**2 - 2*Q*u*v*co + Q*Q*x0*x0*v*v
                -(2*Q/x0)*u*u*v*co + 2*Q*Q*x0*u*v*v + Q*Q*u*u*v*v)
    def Gu(u,v):
        return 2*u/x0**2 - 2*Q*v*co - (4*Q/x0)*u*v*co + 2*Q*Q*x0*v*v + 2*Q*Q*u*v*v
    def Gv(u,v):
        return -2*Q*u*co + 2*Q*Q*x0*x0*v - (2*Q/x0)*u*u*co + 4*Q*Q*x0*u*v + 2*Q*Q*u*u*v
    def F(u,v):
        g=G(u,v)
        return np.array([-Q*v*s/g - x0d, (Q*u*s - a*Q*u*u*sc)/g - y0d])
    def J(u,v):
        g=G(u,v); gu=Gu(u,v); gv=Gv(u,v)
        N1=-Q*v*s; N2=Q*u*s-a*Q*u*u*sc
        return np.array([[ -N1*gu/g**2, (-Q*s*g - N1*gv)/g**2],
                         [((Q*s-2*a*Q*u*sc)*g - N2*gu)/g**2, -N2*gv/g**2]])
    return x0,y0,x0d,y0d,F,J,G

def newton(F,J,z0,tol=1e-13,itmax=60):
    z=np.array(z0,float)
    for _ in range(itmax):
        f=F(*z)
        if not np.all(np.isfinite(f)): return None
        if np.max(np.abs(f))<tol: return z
        Jm=J(*z)
        try: dz=np.linalg.solve(Jm,-f)
        except np.linalg.LinAlgError: return None
        # damp huge steps
        nz=np.linalg.norm(dz)
        if nz>1.0: dz*=1.0/nz
        z=z+dz
    f=F(*z)
    return z if np.max(np.abs(f))<tol else None

def locate(t0):
    x0,y0,x0d,y0d,F,J,G = mk(t0)
    s = np.sin((1+c)*t0); sc=np.sin(c*t0); co=np.cos((1+c)*t0)
    cands=[]
    K=Q*s
    L=(2*x0d*Q*co + y0d/x0**2 + Q*Q*x0*x0*x0d*x0d/y0d) + a*Q*sc if abs(y0d)>1e-8 else None
    seeds=[]
    if L is not None and abs(L)>1e-12:
        u0=K/L; v0=(x0d/y0d)*(a*u0*u0*sc/s - u0)
        if np.hypot(u0,v0) < 10*max(1.0,abs(x0)):
            seeds.append((u0,v0))
    rsc = max(0.05, 0.1*abs(x0))
    for r in [rsc, 3*rsc, 9*rsc, 27*rsc]:
        for k in range(8):
            ph=2*np.pi*k/8
            seeds.append((r*np.cos(ph), r*np.sin(ph)))
    best=None
    for z0 in seeds:
        z=newton(F,J,z0)
        if z is None: continue
        d0=np.hypot(*z)
        if d0<1e-8: continue
        Jm=J(*z); ev=np.linalg.eigvals(Jm)
        if np.max(np.abs(ev.imag))>1e-8: continue
        ev=np.sort(ev.real)
        if ev[0]*ev[1]>=0: continue
        if best is None or d0<best[1]:
            best=(z,d0,ev,Jm)
    return best

best=locate(10.0)
z,d0,ev,Jm = best
print("t0=10: d0 =", d0, " (u0,v0) =", z, " eigs:", ev, " sym offdiag:", Jm[0,1], Jm[1,0])

rng=np.random.default_rng(2)
lams=[];d0s=[];fails=0
for t0 in rng.uniform(0.5,1000,400):
    if abs(np.sin((1+c)*t0))<0.05 or abs(np.sin(c*t0))<0.05: continue
    r=locate(t0)
    if r is None: fails+=1; continue
    z,d0,ev,Jm=r
    lams.append(ev[1]); d0s.append(d0)
lams=np.array(lams);d0s=np.array(d0s)
A_=np.vstack([np.log(1/d0s),np.ones_like(d0s)]).T
p,q=np.linalg.lstsq(A_,np.log(lams),rcond=None)[0]
print(f"n={len(lams)} fails={fails} p={p:.3f} d0 range [{d0s.min():.3g},{d0s.max():.3g}]")
