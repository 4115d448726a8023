import init, { classification_table, ptc_check, transform_at } from "./pkg/poincare_ptc_web.js";

const $ = (id) => document.getElementById(id);

function fmtComplex([re, im]) {
  const r = Math.abs(re) < 1e-12 ? 0 : re;
  const i = Math.abs(im) < 1e-12 ? 0 : im;
  if (i === 0) return r.toFixed(3);
  if (r === 0) return `${i.toFixed(3)}i`;
  return `${r.toFixed(3)}${i < 0 ? "-" : "+"}${Math.abs(i).toFixed(3)}i`;
}

function matrix(rows) {
  return rows.map((row) => row.map(fmtComplex).map((s) => s.padStart(14)).join("")).join("\n");
}

function showTable() {
  const data = JSON.parse(classification_table($("rep").value));
  const head = "<tr><th>operator</th><th>verdict</th><th>nullspace</th><th>q²</th><th>published</th></tr>";
  const body = data.rows
    .map((r) => {
      const stated = r.expected !== "unstated";
      const mismatch = stated && r.expected !== r.verdict;
      const scale = r.involution_scale ? fmtComplex(r.involution_scale) : "";
      return `<tr class="${mismatch ? "mismatch" : ""}"><td>${r.op}</td>` +
        `<td class="${r.verdict}">${r.verdict}</td><td>${r.nullspace_dim}</td>` +
        `<td>${scale}</td><td>${r.expected}</td></tr>`;
    })
    .join("");
  const summary = data.matches_paper ? "All stated verdicts reproduced." : "Some stated verdicts differ.";
  $("table").innerHTML = `<table>${head}${body}</table><p>${summary}</p>`;
}

function showPtc() {
  try {
    const r = JSON.parse(ptc_check($("labels").value));
    $("ptc-out").className = "";
    $("ptc-out").textContent = `${r.labels}: ${r.complete ? "PTC-complete" : "not PTC-complete"}`;
  } catch (e) {
    $("ptc-out").className = "err";
    $("ptc-out").textContent = String(e.message ?? e);
  }
}

function showTransform() {
  const v = ["p1", "p2", "p3", "m"].map((id) => parseFloat($(id).value));
  try {
    const r = JSON.parse(transform_at(...v));
    $("transform-out").innerHTML =
      `<p>E = ${r.energy.toFixed(4)}; ‖UU† − 1‖ = ${r.u_unitarity.toExponential(1)}, ` +
      `‖UHU† − Γ₀E‖ = ${r.diagonalization.toExponential(1)}, ‖U₁U₁† − 1‖ = ${r.u1_unitarity.toExponential(1)}</p>` +
      `<p>S·p/E spectrum: ${r.helicity.map((x) => x.toFixed(3)).join(", ")}</p>` +
      `<h3>U</h3><pre>${matrix(r.u)}</pre><h3>U₁</h3><pre>${matrix(r.u1)}</pre>`;
  } catch (e) {
    $("transform-out").innerHTML = `<p class="err">${e.message ?? e}</p>`;
  }
}

await init();
$("classify").addEventListener("click", showTable);
$("ptc").addEventListener("click", showPtc);
$("transform").addEventListener("click", showTransform);
showTable();
showPtc();
showTransform();
