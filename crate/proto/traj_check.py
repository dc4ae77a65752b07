import numpy as np
from scipy.integrate import solve_ivp

a = 1.0; b = 1.0; c = np.sqrt(2.0)/2.0
Q = b*np.sqrt(c)

def G(x,y,t):
    return (1 + 2*a*x*np.cos(t) + 2*Q*x*y*np.cos((1+c)*t) + a*a*x*x
            + 2*a*Q*x*x*y*np.cos(c*t) + Q*Q*x*x*y*y)

def rhs(t,z):
    x,y=z
    g=G(x,y,t)
    return [-(a*np.sin(t)+Q*y*np.sin((1+c)*t))/g,
            -(Q*x*(a*x*np.sin(c*t)+np.sin((1+c)*t)))/g]

def rhs_var(t,z):
    x,y,dx,dy=z
    g=G(x,y,t)
    st=np.sin(t); s1=np.sin((1+c)*t); sc=np.sin(c*t)
    ct=np.cos(t); c1=np.cos((1+c)*t); cc=np.cos(c*t)
    Nx=-(a*st+Q*y*s1); Ny=-Q*x*(a*x*sc+s1)
    Gx=2*a*ct+2*Q*y*c1+2*a*a*x+4*a*Q*x*y*cc+2*Q*Q*x*y*y
    Gy=2*Q*x*c1+2*a*Q*x*x*cc+2*Q*Q*x*x*y
    j11=-Nx*Gx/g**2
    j12=(-Q*s1*g-Nx*Gy)/g**2
    j21=(-Q*(2*a*x*sc+s1)*g-Ny*Gx)/g**2
    j22=-Ny*Gy/g**2
    return [Nx/g, Ny/g, j11*dx+j12*dy, j21*dx+j22*dy]

# Delta S staircase, t<=200
t_end=200
s1=solve_ivp(rhs,[0,t_end],[-1.1,-1.1],rtol=1e-11,atol=1e-12,max_step=0.01,dense_output=True)
s2=solve_ivp(rhs,[0,t_end],[-1.1+1e-4,-1.1],rtol=1e-11,atol=1e-12,max_step=0.01,dense_output=True)
tt=np.arange(0,t_end,0.1)
z1=s1.sol(tt); z2=s2.sol(tt)
dS=np.hypot(z1[0]-z2[0],z1[1]-z2[1])
for lev in [1e-3,1e-2,1e-1]:
    i=np.argmax(dS>=lev)
    print(f"dS reaches {lev:g} at t={tt[i]:.1f}")
i1=np.searchsorted(tt,175.2); i2=np.searchsorted(tt,176.3)
print("growth factor over [175.2,176.3]:", dS[i2]/dS[i1])

# chi(t): variational to t=2000
sol=solve_ivp(rhs_var,[0,2000],[-1.1,-1.1,1.0,0.0],rtol=1e-11,atol=1e-12,max_step=0.01,
              t_eval=[10,100,500,1000,2000])
for t,z in zip(sol.t,sol.y.T):
    xi=np.hypot(z[2],z[3])
    print(f"t={t}: chi={np.log(xi)/t:.4f}")

# regular orbits classification
for ic in [(0.75,0.25),(1.0,1.0)]:
    sol=solve_ivp(rhs_var,[0,1000],[*ic,1.0,0.0],rtol=1e-10,atol=1e-12,max_step=0.01,
                  t_eval=[100,1000])
    chis=[np.log(np.hypot(z[2],z[3]))/t for t,z in zip(sol.t,sol.y.T)]
    print(f"orbit {ic}: chi(100)={chis[0]:.5f} chi(1000)={chis[1]:.5f}")
sol=solve_ivp(rhs_var,[0,1000],[1.4,1.4,1.0,0.0],rtol=1e-10,atol=1e-12,max_step=0.01,t_eval=[100,1000])
chis=[np.log(np.hypot(z[2],z[3]))/t for t,z in zip(sol.t,sol.y.T)]
print(f"orbit (1.4,1.4): chi(100)={chis[0]:.5f} chi(1000)={chis[1]:.5f}")
