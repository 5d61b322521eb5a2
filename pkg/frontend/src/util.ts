// One in-flight request per panel: issuing a new request aborts the old one,
// and a response that lost the race is reported as superseded, never applied.

export const SUPERSEDED = Symbol("superseded");

export class PanelRequest {
  private controller: AbortController | null = null;
  private seq = 0;

  /** Abort whatever is in flight and run `task` with a fresh signal. */
  async run<T>(task: (signal: AbortSignal) => Promise<T>): Promise<T | typeof SUPERSEDED> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const ticket = ++this.seq;
    try {
      const result = await task(controller.signal);
      return ticket === this.seq ? result : SUPERSEDED;
    } catch (err) {
      if (ticket !== this.seq || controller.signal.aborted) return SUPERSEDED;
      throw err;
    }
  }

  abort(): void {
    this.controller?.abort();
    this.controller = null;
  }
}

/** CSV from rows of service-provided values, rendered verbatim. */
export function toCsv(header: string[], rows: (number | string | null)[][]): string {
  const line = (cells: (number | string | null)[]) =>
    cells.map((c) => (c === null ? "" : String(c))).join(",");
  return [line(header), ...rows.map(line)].join("\n") + "\n";
}

export function downloadText(filename: string, text: string, mime = "text/plain"): void {
  const blob = new Blob([text], { type: mime });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = filename;
  a.click();
  URL.revokeObjectURL(url);
}

export function downloadCanvasPng(canvas: HTMLCanvasElement, filename: string): void {
  canvas.toBlob((blob) => {
    if (!blob) return;
    const url = URL.createObjectURL(blob);
    const a = document.createElement("a");
    a.href = url;
    a.download = filename;
    a.click();
    URL.revokeObjectURL(url);
  }, "image/png");
}
