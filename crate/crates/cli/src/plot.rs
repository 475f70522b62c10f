//! Generated matplotlib scripts that render the data files.

/// Gain versus the sweep value, with the QFI bound when present.
pub fn sensitivity_script(csv_name: &str, xlabel: &str, log_x: bool) -> String {
    format!(
        r##"import csv
import matplotlib.pyplot as plt

rows = [r for r in csv.DictReader(l for l in open("{csv_name}") if not l.startswith("#"))]
x = [float(r["sweep_value"]) for r in rows]
gain = [float(r["gain_db"]) for r in rows]
bound = [float(r["qfi_bound_db"]) if r["qfi_bound_db"] else float("nan") for r in rows]
plt.plot(x, gain, label="protocol")
if any(b == b for b in bound):
    plt.plot(x, bound, "--", label="QFI bound")
plt.xlabel("{xlabel}")
plt.ylabel("gain over SQL (dB)")
{xscale}plt.legend()
plt.savefig("{csv_name}.png", dpi=150)
"##,
        xscale = if log_x { "plt.xscale(\"log\")\n" } else { "" }
    )
}

/// QFI per method, with window markers read from the header.
pub fn qfi_script(csv_name: &str, xlabel: &str, log_x: bool) -> String {
    format!(
        r##"import csv
import matplotlib.pyplot as plt

lines = open("{csv_name}").read().splitlines()
markers = [float(l.split("=")[1]) for l in lines if l.startswith("# marker")]
rows = list(csv.DictReader(l for l in lines if not l.startswith("#")))
for method in sorted(set(r["method"] for r in rows)):
    pts = [(float(r["sweep_value"]), float(r["qfi"])) for r in rows if r["method"] == method]
    plt.plot([p[0] for p in pts], [p[1] for p in pts], label=method)
for m in markers:
    plt.axvline(m, color="gray", lw=0.8)
plt.xlabel("{xlabel}")
plt.ylabel("quantum Fisher information")
plt.yscale("log")
{xscale}plt.legend()
plt.savefig("{csv_name}.png", dpi=150)
"##,
        xscale = if log_x { "plt.xscale(\"log\")\n" } else { "" }
    )
}

/// One image per Wigner panel.
pub fn wigner_script(panels: &[String]) -> String {
    let list = panels.iter().map(|p| format!("\"{p}\"")).collect::<Vec<_>>().join(", ");
    format!(
        r##"import numpy as np
import matplotlib.pyplot as plt

panels = [{list}]
fig, axes = plt.subplots(1, len(panels), figsize=(4 * len(panels), 4), squeeze=False)
for ax, name in zip(axes[0], panels):
    meta = [l for l in open(name) if l.startswith("#")]
    re = [float(v) for v in meta[-2].split()[3:8:2]]
    im = [float(v) for v in meta[-1].split()[3:8:2]]
    w = np.loadtxt(name, comments="#")
    extent = [re[0], re[0] + re[1] * (re[2] - 1), im[0], im[0] + im[1] * (im[2] - 1)]
    lim = np.abs(w).max()
    ax.imshow(w, origin="lower", extent=extent, cmap="RdBu_r", vmin=-lim, vmax=lim)
    ax.set_title(meta[1][2:].strip())
    ax.set_xlabel("Re zeta")
    ax.set_ylabel("Im zeta")
fig.tight_layout()
fig.savefig(panels[0].rsplit(".panel", 1)[0] + ".png", dpi=150)
"##
    )
}

/// ⟨S_z⟩ traces of the three models.
pub fn dynamics_script(csv_name: &str) -> String {
    format!(
        r##"import csv
import matplotlib.pyplot as plt

rows = list(csv.DictReader(l for l in open("{csv_name}") if not l.startswith("#")))
t = [float(r["t"]) for r in rows]
fig, (a, b) = plt.subplots(2, 1, sharex=True)
a.plot(t, [float(r["sz_tavis_cummings"]) for r in rows], label="Tavis-Cummings")
a.plot(t, [float(r["sz_effective"]) for r in rows], "k--", label="effective")
a.plot(t, [float(r["sz_effective_corrected"]) for r in rows], "r:", label="effective, corrected")
a.set_ylabel("<S_z>")
a.legend()
b.plot(t, [float(r["qfi_db_tavis_cummings"]) for r in rows], label="Tavis-Cummings")
b.plot(t, [float(r["qfi_db_effective_corrected"]) for r in rows], "k--", label="effective, corrected")
b.set_ylabel("QFI bound (dB)")
b.set_xlabel("t")
fig.savefig("{csv_name}.png", dpi=150)
"##
    )
}
