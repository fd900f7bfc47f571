/** Matrix grid rendering shared by the comparison heatmap and the
 * document-topic alignment grid.
 *
 * Cells keep the exact payload value in `data-value` and in the hover
 * title; the background color scale is local to the rendered matrix and
 * a caption says so on screen.
 */

export interface MatrixSpec {
  rowLabels: string[];
  colLabels: string[];
  values: number[][];
  caption: string;
}

function cellColor(value: number, min: number, max: number): string {
  if (!(max > min)) {
    return "rgba(30, 90, 160, 0.08)";
  }
  const t = (value - min) / (max - min);
  return `rgba(30, 90, 160, ${(0.05 + 0.85 * t).toFixed(3)})`;
}

export function renderMatrix(spec: MatrixSpec): HTMLElement {
  const wrap = document.createElement("figure");
  wrap.className = "matrix";

  let min = Infinity;
  let max = -Infinity;
  for (const row of spec.values) {
    for (const v of row) {
      if (v < min) min = v;
      if (v > max) max = v;
    }
  }

  const table = document.createElement("table");
  const head = table.createTHead().insertRow();
  head.appendChild(document.createElement("th"));
  for (const label of spec.colLabels) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  const body = table.createTBody();
  spec.values.forEach((row, i) => {
    const tr = body.insertRow();
    const th = document.createElement("th");
    th.textContent = spec.rowLabels[i];
    tr.appendChild(th);
    row.forEach((value) => {
      const td = tr.insertCell();
      td.className = "cell";
      td.dataset.value = String(value);
      td.title = String(value);
      td.style.backgroundColor = cellColor(value, min, max);
    });
  });
  wrap.appendChild(table);

  const caption = document.createElement("figcaption");
  caption.textContent = `${spec.caption} (color scale local to this view)`;
  wrap.appendChild(caption);
  return wrap;
}
