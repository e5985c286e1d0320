"""High-precision standard normal quantiles used to freeze the quantile test table."""
import mpmath as mp

mp.mp.dps = 50

U = ["1e-10", "1e-8", "1e-6", "1e-4", "0.001", "0.01", "0.025", "0.05", "0.1", "0.25",
     "0.5", "0.6", "0.75", "0.8413447460685429", "0.9", "0.975", "0.99", "0.999",
     "0.9999", "0.999999", "0.9999999999"]


def quantile(u):
    # u is parsed as the double the C++ test will pass in
    u = mp.mpf(float(u))
    return -mp.sqrt(2) * mp.erfinv(1 - 2 * u) if u != mp.mpf("0.5") else mp.mpf(0)


def student_t_quantile(p, df):
    df = mp.mpf(df)
    tail = lambda x: mp.betainc(df / 2, mp.mpf(1) / 2, 0, df / (df + x * x), regularized=True) / 2
    return mp.findroot(lambda x: tail(x) - (1 - mp.mpf(p)), 3)


if __name__ == "__main__":
    print("t(0.995, 15):", mp.nstr(student_t_quantile("0.995", 15), 20))
    for u in U:
        print(f"    {{{float(u)!r}, {mp.nstr(quantile(u), 20)}}},")
