// Shapes of the API bodies the dashboard consumes. Field names mirror the
// server's JSON exactly; the dashboard never derives numbers from them.
export {};
