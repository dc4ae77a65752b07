import numpy as np

a = 1.0; b = 1.0; c = np.sqrt(2.0)/2.0
Q = b*np.sqrt(c)

def nodal(t):
    s1c = np.sin((1+c)*t); sc = np.sin(c*t); st = np.sin(t)
    x0 = -s1c/(a*sc); y0 = -a*st/(Q*s1c)
    x0d = -((1+c)*np.cos((1+c)*t)*sc - c*s1c*np.cos(c*t))/(a*sc**2)
    y0d = -(a/Q)*(np.cos(t)*s1c - st*(1+c)*np.cos((1+c)*t))/s1c**2
    return x0, y0, x0d, y0d

def mk(t0):
    x0,y0,x0d,y0d = nodal(t0)
    s=np.sin((1+c)*t0); sc=np.sin(c*t0); co=np.cos((1+c)*t0)
    def G(u,v):
        return (u*u/x0**2 - 2*Q*u*v*co + Q*Q*x0*x0*v*v
                -(2*Q/x0)*u*u*v*co + 2*Q*Q*x0*u*v*v + Q*Q*u*u*v*v)
    def F(z):
        u,v=z; g=G(u,v)
        return np.array([-Q*v*s/g - x0d, (Q*u*s - a*Q*u*u*sc)/g - y0d])
    def J(z):
        h=1e-7
        return np.array([ (F([z[0]+h,z[1]])-F([z[0]-h,z[1]]))/(2*h),
                          (F([z[0],z[1]+h])-F([z[0],z[1]-h]))/(2*h) ]).T
    return F,J,(x0,y0,x0d,y0d)

def newton(F,J,z0):
    z=np.array(z0,float)
    for _ in range(80):
        f=F(z)
        if not np.all(np.isfinite(f)): return None
        if np.max(np.abs(f))<1e-13: return z
        try: dz=np.linalg.solve(J(z),-f)
        except np.linalg.LinAlgError: return None
        n=np.linalg.norm(dz)
        if n>1: dz/=n
        z=z+dz
    return z if np.max(np.abs(F(z)))<1e-13 else None

def locate(t0):
    F,J,nod = mk(t0)
    x0=nod[0]
    best=None
    rsc=max(0.05,0.1*abs(x0))
    for r in [rsc,3*rsc,9*rsc,27*rsc]:
        for k in range(8):
            ph=2*np.pi*k/8
            z=newton(F,J,(r*np.cos(ph),r*np.sin(ph)))
            if z is None: continue
            d0=np.hypot(*z)
            if d0<1e-8: continue
            ev,evec=np.linalg.eigh((J(z)+J(z).T)/2)
            if ev[0]*ev[1]>=0: continue
            if best is None or d0<best[1]: best=(z,d0,ev,evec)
    return best

def trace(F, start, forward, node=(0,0), smax=60.0, ds=2e-3, rcap=0.03, box=6.0):
    z=np.array(start,float); s=0.0
    phi_prev=np.arctan2(z[1]-node[1], z[0]-node[0]); wind=0.0
    sgn = 1.0 if forward else -1.0
    status='smax'
    while s<smax:
        # RK4 on normalized field
        def g(z):
            f=sgn*F(z); n=np.linalg.norm(f)
            return f/n if n>1e-14 else f*0
        k1=g(z); k2=g(z+0.5*ds*k1); k3=g(z+0.5*ds*k2); k4=g(z+ds*k3)
        z=z+(ds/6)*(k1+2*k2+2*k3+k4); s+=ds
        R=np.hypot(z[0]-node[0],z[1]-node[1])
        phi=np.arctan2(z[1]-node[1], z[0]-node[0])
        dphi=phi-phi_prev
        while dphi>np.pi: dphi-=2*np.pi
        while dphi<-np.pi: dphi+=2*np.pi
        wind+=dphi; phi_prev=phi
        if R<rcap: status='node'; break
        if abs(z[0])>box or abs(z[1])>box: status='escape'; break
    return status, wind, s

for t0 in [175.7, 175.8]:
    z,d0,ev,evec = locate(t0)
    F,J,nod = mk(t0)
    print(f"t0={t0}: xpt={z} d0={d0:.4f} eigs={ev}")
    labels=[]
    for which,lam,vec in [('unstable',ev[1],evec[:,1]),('stable',ev[0],evec[:,0])]:
        fwd = (which=='unstable')
        for sgn in [1,-1]:
            start = z + sgn*1e-4*vec
            st,w,s = trace(F, start, fwd)
            labels.append((which,sgn,st,w/np.pi,s))
    for L in labels: print("   branch:",L)

# limit cycle return map
def drift(t0, r):
    F,J,nod = mk(t0)
    s1=np.sin((1+c)*t0); rot = np.sign(s1)
    z=np.array([r,0.0]); phi=0.0; t=0.0; dt=2e-4
    phi_prev=0.0
    while abs(phi)<2*np.pi:
        k1=F(z); k2=F(z+0.5*dt*k1); k3=F(z+0.5*dt*k2); k4=F(z+dt*k3)
        z=z+(dt/6)*(k1+2*k2+2*k3+k4); t+=dt
        ph=np.arctan2(z[1],z[0])
        d=ph-phi_prev
        while d>np.pi: d-=2*np.pi
        while d<-np.pi: d+=2*np.pi
        phi+=d; phi_prev=ph
        if t>2000: return None
        if np.hypot(*z)>10: return np.inf
    return np.hypot(*z)-r

for t0 in [175.70,175.76,175.78]:
    z,d0,ev,evec = locate(t0)
    rs=np.linspace(0.1,0.9,9)*d0
    ds=[drift(t0,r) for r in rs]
    print(f"t0={t0} d0={d0:.3f} drift signs:", ["+" if d and d>0 else ("-" if d is not None else "?") for d in ds])
