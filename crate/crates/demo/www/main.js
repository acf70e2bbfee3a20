import init, { exit_curve, transmission_curve, spectrum, quantization_curve } from "./pkg/gluedwalk_demo.js";

const $ = (id) => document.getElementById(id);

// Draws y(x) on [x0, x1] x [y0, y1]; NaN breaks the line. `marks` are
// horizontal guide levels.
function plot(canvas, xs, ys, [x0, x1], [y0, y1], marks = []) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 30;
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - y0) / (y1 - y0)) * (h - 2 * pad);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.fillText(y1.toFixed(2), 2, pad + 4);
  ctx.fillText(y0.toFixed(2), 2, h - pad);
  ctx.fillText(x0.toFixed(2), pad, h - 10);
  ctx.fillText(x1.toFixed(2), w - pad - 24, h - 10);
  ctx.setLineDash([4, 4]);
  for (const m of marks) {
    ctx.beginPath();
    ctx.moveTo(sx(x0), sy(m));
    ctx.lineTo(sx(x1), sy(m));
    ctx.stroke();
  }
  ctx.setLineDash([]);
  ctx.strokeStyle = "#1565c0";
  ctx.beginPath();
  let pen = false;
  for (let i = 0; i < xs.length; i++) {
    const y = ys[i];
    if (!Number.isFinite(y) || y < y0 || y > y1) { pen = false; continue; }
    if (pen) ctx.lineTo(sx(xs[i]), sy(y)); else ctx.moveTo(sx(xs[i]), sy(y));
    pen = true;
  }
  ctx.stroke();
}

function guarded(out, f) {
  try {
    out.classList.remove("err");
    f();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e.message ?? e);
  }
}

function walk() {
  const out = $("walk-out");
  guarded(out, () => {
    const n = Number($("walk-n").value), tMax = Number($("walk-t").value), m = 1200;
    const ys = exit_curve(n, tMax, m);
    const xs = Array.from(ys, (_, i) => (tMax * i) / (m - 1));
    const top = Math.max(...ys);
    plot($("walk-plot"), xs, ys, [0, tMax], [0, Math.max(top * 1.1, 1e-6)]);
    // First local maximum above the noise floor.
    let first = -1;
    for (let i = 1; i + 1 < m; i++) {
      if (ys[i] >= 1e-10 && ys[i] > ys[i - 1] && ys[i] >= ys[i + 1]) { first = i; break; }
    }
    out.textContent = first < 0
      ? `max ${top.toFixed(4)}; no arrival peak yet`
      : `first arrival peak at t = ${xs[first].toFixed(2)}, probability ${ys[first].toFixed(4)}; max ${top.toFixed(4)}`;
  });
}

function transmission() {
  const out = $("tr-out");
  guarded(out, () => {
    const alpha = Number($("tr-alpha").value), m = 800;
    $("tr-alpha-val").textContent = alpha.toFixed(3);
    const ys = transmission_curve(alpha, m);
    const xs = Array.from(ys, (_, i) => (Math.PI * (i + 1)) / (m + 1));
    plot($("tr-plot"), xs, ys, [0, Math.PI], [0, 1]);
    const a2 = alpha * alpha;
    out.textContent = `|T(pi/2)|^2 = 4a^2/(a^2+1)^2 = ${(4 * a2 / ((a2 + 1) ** 2)).toFixed(6)}`;
  });
}

function quantization() {
  const out = $("q-out");
  guarded(out, () => {
    const n = Number($("q-n").value), m = 4000;
    const ys = quantization_curve(n, m);
    const xs = Array.from(ys, (_, i) => (Math.PI * (i + 0.5)) / m);
    plot($("q-plot"), xs, ys, [0, Math.PI], [-4, 4], [Math.SQRT2, -Math.SQRT2]);
    const s = spectrum(n);
    const bound = s[s.length - 1];
    const energies = Array.from(s.slice(0, -1));
    let gap = Infinity;
    for (let i = 1; i < energies.length; i++) gap = Math.min(gap, energies[i] - energies[i - 1]);
    out.textContent =
      `${energies.length} eigenvalues (${bound} bound states), smallest gap ${gap.toExponential(4)}, gap*n^3 = ${(gap * n ** 3).toFixed(3)}\n` +
      (energies.length <= 40 ? energies.map((e) => e.toFixed(6)).join("  ") : "");
  });
}

await init();
$("walk-n").addEventListener("input", walk);
$("walk-t").addEventListener("input", walk);
$("tr-alpha").addEventListener("input", transmission);
$("q-n").addEventListener("input", quantization);
walk();
transmission();
quantization();
