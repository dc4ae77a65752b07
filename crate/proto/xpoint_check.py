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

def Gparts(u, v, t, x0):
    co = np.cos((1+c)*t)
    G2 = u*u/x0**2 - 2*Q*u*v*co + Q*Q*x0*x0*v*v
    G3 = -(2*Q/x0)*u*u*v*co + 2*Q*Q*x0*u*v*v
    G4 = Q*Q*u*u*v*v
    return G2+G3+G4

def field(u, v, t0, nod):
    x0, y0, x0d, y0d = nod
    s = np.sin((1+c)*t0); sc = np.sin(c*t0)
    G = Gparts(u,v,t0,x0)
    F1 = -Q*v*s/G - x0d
    F2 = (Q*u*s - a*Q*u*u*sc)/G - y0d
    return np.array([F1,F2])

def jac(u, v, t0, nod, h=1e-7):
    J = np.zeros((2,2))
    for j,(du,dv) in enumerate([(h,0),(0,h)]):
        J[:,j] = (field(u+du,v+dv,t0,nod)-field(u-du,v-dv,t0,nod))/(2*h)
    return J

def xpoint(t0):
    nod = nodal(t0)
    x0,y0,x0d,y0d = nod
    s = np.sin((1+c)*t0); sc=np.sin(c*t0); co=np.cos((1+c)*t0)
    K = Q*s
    L = (2*x0d*Q*co + y0d/x0**2 + Q*Q*x0*x0*x0d*x0d/y0d) + a*Q*sc
    u0 = K/L
    v0 = (x0d/y0d)*(a*u0*u0*sc/s - u0)
    z = np.array([u0,v0])
    for _ in range(60):
        F = field(z[0],z[1],t0,nod)
        J = jac(z[0],z[1],t0,nod)
        dz = np.linalg.solve(J,-F)
        z = z + dz
        if np.max(np.abs(F))<1e-13: break
    F = field(z[0],z[1],t0,nod)
    J = jac(z[0],z[1],t0,nod)
    ev, evec = np.linalg.eig(J)
    return z, F, J, np.sort(ev)

z,F,J,ev = xpoint(10.0)
print("t0=10 xpoint:", z, "resid:", np.max(np.abs(F)), "d0 =", np.hypot(*z))
print("eigs:", ev, "product:", ev[0]*ev[1], "sym:", J[0,1], J[1,0])

# sweep for eigen scaling
rng = np.random.default_rng(1)
lams=[]; d0s=[]
tries = rng.uniform(0.5, 1000, 600)
ok=0
for t0 in tries:
    s1c = np.sin((1+c)*t0); sc = np.sin(c*t0)
    if abs(s1c)<0.05 or abs(sc)<0.05: continue
    try:
        z,F,J,ev = xpoint(t0)
    except np.linalg.LinAlgError:
        continue
    if np.max(np.abs(F))>1e-10: continue
    if ev[0]*ev[1]>=0: continue
    d0=np.hypot(*z)
    if d0<1e-6 or d0>50: continue
    lams.append(max(ev)); d0s.append(d0); ok+=1
lams=np.array(lams); d0s=np.array(d0s)
A_ = np.vstack([np.log(1/d0s), np.ones_like(d0s)]).T
p, q = np.linalg.lstsq(A_, np.log(lams), rcond=None)[0]
print(f"sweep n={ok}, scaling exponent p = {p:.3f}")
print("d0 range:", d0s.min(), d0s.max())
