"""
Denoising a piecewise-constant image with a cone-shaped object
==============================================================

The image preset (alpha=0.2, beta=0.6, tau=0.05) balances the curvature term
against enough TV to keep edges sharp. On a composite of flat steps and a
cone, the solver removes variance-0.01 Gaussian noise while preserving both
the step edges and the smooth cone flanks; PSNR and SSIM quantify the gain.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

import gctv

out_dir = pathlib.Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

base = gctv.steps(64, 64, levels=4, height=0.6)
bump = gctv.cone(64, 64, radius=12.0, height=0.4)
clean = base.like(base.data + bump.data)
noisy = gctv.add_gaussian_noise(clean, gctv.NoiseSpec(sigma=0.01, seed=42))

params = gctv.SplitParams(alpha=0.2, beta=0.6, tau=0.05, tol=1e-5, max_outer=2000)
result = gctv.run(noisy, params)

for label, field in [("noisy", noisy), ("denoised", result.u_star)]:
    p = gctv.psnr(field, clean)
    s = gctv.ssim(field, clean)
    e = gctv.lp_errors(field, clean)
    print(f"{label:9s} PSNR {p:6.2f} dB  SSIM {s:.4f}  Linf {e.linf:.4f}")

fig, axes = plt.subplots(1, 4, figsize=(14, 3.6))
for ax, (field, title) in zip(
    axes,
    [(clean.data, "clean"), (noisy.data, "noisy"), (result.u_star.data, "denoised"),
     (result.u_star.data - clean.data, "error")],
):
    im = ax.imshow(field, cmap="gray" if title != "error" else "coolwarm")
    ax.set_title(title)
    ax.set_axis_off()
    fig.colorbar(im, ax=ax, shrink=0.8)
fig.tight_layout()
fig.savefig(out_dir / "image_denoising.png", dpi=120)
print(f"wrote {out_dir / 'image_denoising.png'}")

# The same run through the command line (formats picked by extension):
#   gctv synth steps --size 64 64 --out steps.csv
#   gctv add-noise steps.csv --sigma 0.01 --seed 42 --out noisy.csv
#   gctv denoise noisy.csv --preset image --out denoised.csv \
#       --reference steps.csv --history history.csv
#   gctv metrics denoised.csv steps.csv
