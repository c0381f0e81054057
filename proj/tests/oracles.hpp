#pragma once

// Independent reference integrators used only by the tests. They work on plain
// std::complex arrays and never call the library's propagators.

#include <array>
#include <cmath>
#include <complex>

namespace oracle {

using c = std::complex<double>;
using M2 = std::array<std::array<c, 2>, 2>;

struct Channel {
    bool stokes = false;
    double g = 0, Gamma = 0, gamma = 0, cd = 0; // cd = c_g Delta
};

inline M2 drift(const Channel& ch)
{
    const c i(0, 1);
    M2 P{};
    P[0][0] = -(ch.gamma + 2.0 * i * ch.cd) / 4.0;
    P[0][1] = -i * ch.g / 2.0;
    P[1][0] = (ch.stokes ? i : -i) * ch.g;
    P[1][1] = -(2.0 * i * ch.cd + ch.Gamma) / 2.0;
    return P;
}

inline M2 mul(const M2& a, const M2& b)
{
    M2 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

inline M2 adj(const M2& a)
{
    M2 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r[i][j] = std::conj(a[j][i]);
    return r;
}

inline M2 axpy(const M2& a, double s, const M2& b)
{
    M2 r = a;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r[i][j] += s * b[i][j];
    return r;
}

inline M2 identity() { return M2{{{c(1), c(0)}, {c(0), c(1)}}}; }

// Classic RK4 on dG/d eta = P G.
inline M2 propagate(const Channel& ch, double eta, int steps)
{
    M2 P = drift(ch), G = identity();
    double h = eta / steps;
    for (int n = 0; n < steps; ++n) {
        M2 k1 = mul(P, G);
        M2 k2 = mul(P, axpy(G, h / 2, k1));
        M2 k3 = mul(P, axpy(G, h / 2, k2));
        M2 k4 = mul(P, axpy(G, h, k3));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                G[i][j] += h / 6 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]);
    }
    return G;
}

// RK4 on the second-moment equation dC/d eta = P C + C P^dag + D.
inline M2 moments(const Channel& ch, M2 C, const M2& D, double eta, int steps)
{
    M2 P = drift(ch), Pd = adj(P);
    auto rhs = [&](const M2& X) {
        M2 a = mul(P, X), b = mul(X, Pd), r{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r[i][j] = a[i][j] + b[i][j] + D[i][j];
        return r;
    };
    double h = eta / steps;
    for (int n = 0; n < steps; ++n) {
        M2 k1 = rhs(C);
        M2 k2 = rhs(axpy(C, h / 2, k1));
        M2 k3 = rhs(axpy(C, h / 2, k2));
        M2 k4 = rhs(axpy(C, h, k3));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                C[i][j] += h / 6 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]);
    }
    return C;
}

// Solves P X + X P^dag = R by Gaussian elimination on the 4x4 system.
inline M2 lyapunov(const M2& P, const M2& R)
{
    std::array<std::array<c, 5>, 4> A{};
    auto idx = [](int i, int j) { return 2 * i + j; };
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            int row = idx(i, j);
            for (int k = 0; k < 2; ++k) {
                A[row][idx(k, j)] += P[i][k];
                A[row][idx(i, k)] += std::conj(P[j][k]);
            }
            A[row][4] = R[i][j];
        }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col]))
                piv = r;
        std::swap(A[col], A[piv]);
        for (int r = 0; r < 4; ++r) {
            if (r == col)
                continue;
            c f = A[r][col] / A[col][col];
            for (int k = col; k < 5; ++k)
                A[r][k] -= f * A[col][k];
        }
    }
    M2 X{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            X[i][j] = A[idx(i, j)][4] / A[idx(i, j)][idx(i, j)];
    return X;
}

} // namespace oracle
